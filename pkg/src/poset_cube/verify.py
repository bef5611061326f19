"""Exhaustive invariant suite over small posets.

Every check walks a list of posets, records pass/fail per item and stops at
the first failure of that check (the remaining checks still run).  An item
whose solver calls exceed ``time_budget`` seconds, or hit the brute-force cap,
counts as inconclusive.
"""

from __future__ import annotations

import random
import time
import zlib
from dataclasses import dataclass, field
from math import comb
from typing import Callable, Iterable

from . import solvers
from .characterization import (
    check_property,
    in_mcw,
    in_miir,
    in_mtd,
    in_nmiir,
)
from .generators import (
    antichain,
    chain,
    enumerate_posets,
    gen_example_1_4,
    gen_sigma,
    random_representation,
    sample_posets,
    sigma_specs,
)
from .poset import (
    EMPTY,
    Poset,
    bits,
    block_decomposition,
    canonical_form,
    component_decomposition,
    disjoint_sum,
    subposet_mask,
    popcount,
    vertical_sum,
)
from .representation import (
    InvalidRepresentation,
    Representation,
    canonical_representation,
    compose_disjoint_reps,
    compose_vertical_reps,
    key_step_quotient,
    key_step_reduce,
    representations_isomorphic,
    split_block_reps,
    split_component_reps,
    validate_representation,
)

SCHEMA = "poset-cube/1"


@dataclass(frozen=True)
class VerifyConfig:
    max_n: int = 5
    sample_n6: int = 50
    seed: int = 0
    time_budget: float | None = None

    def __post_init__(self):
        if not 1 <= self.max_n <= 7:
            raise ValueError("max_n must lie in 1..7")
        if self.sample_n6 < 0:
            raise ValueError("sample_n6 must be non-negative")
        if self.time_budget is not None and self.time_budget <= 0:
            raise ValueError("time_budget must be positive")


@dataclass
class CheckResult:
    name: str
    passed: int = 0
    failed: int = 0
    inconclusive: int = 0
    failure: str | None = None
    notes: dict = field(default_factory=dict)

    @property
    def status(self) -> str:
        if self.failed:
            return "fail"
        if self.inconclusive:
            return "inconclusive"
        return "pass"

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "status": self.status,
            "passed": self.passed,
            "failed": self.failed,
            "inconclusive": self.inconclusive,
            "failure": self.failure,
            "notes": self.notes,
        }


@dataclass
class VerifyReport:
    config: VerifyConfig
    checks: list[CheckResult]
    posets_checked: int

    @property
    def status(self) -> str:
        states = {c.status for c in self.checks}
        if "fail" in states:
            return "fail"
        if "inconclusive" in states:
            return "inconclusive"
        return "pass"

    def as_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "config": {
                "max_n": self.config.max_n,
                "sample_n6": self.config.sample_n6,
                "seed": self.config.seed,
                "time_budget": self.config.time_budget,
            },
            "posets_checked": self.posets_checked,
            "status": self.status,
            "checks": [c.as_dict() for c in self.checks],
        }


def _describe(p: Poset) -> str:
    return f"n={p.n} below={list(p.below)}"


class _Tally:
    def __init__(self, name: str, budget: float | None):
        self.result = CheckResult(name)
        self.budget = budget

    def run(self, items: Iterable, test: Callable[[object], bool | None], describe=_describe) -> CheckResult:
        r = self.result
        for item in items:
            start = time.perf_counter()
            try:
                ok = test(item)
            except solvers.CapExceeded:
                r.inconclusive += 1
                continue
            if self.budget is not None and time.perf_counter() - start > self.budget:
                r.inconclusive += 1
                continue
            if ok is None:
                continue  # not applicable
            if ok:
                r.passed += 1
            else:
                r.failed += 1
                r.failure = describe(item)
                break
        return r


# ---------------------------------------------------------------------------
# helpers


def _brute(p: Poset) -> solvers.ParamReport:
    return solvers.params_brute(p)


def _chain_block_count(p: Poset) -> int:
    return sum(1 for q in block_decomposition(p).parts if q.is_chain())


def _up_sets(p: Poset) -> Iterable[int]:
    for m in range(1, p.full + 1):
        if all(p.above[x] & ~m == 0 for x in bits(m)):
            yield m


def _down_sets(p: Poset) -> Iterable[int]:
    for m in range(1, p.full + 1):
        if all(p.below[x] & ~m == 0 for x in bits(m)):
            yield m


def _restrict(r: Representation, keep: list[int]) -> Representation:
    return Representation.from_masks(r.ground, [r.sets[x] for x in keep])


def _height(p: Poset) -> int:
    return max(p.height_of(x) for x in range(p.n)) + 1


# ---------------------------------------------------------------------------
# individual checks; each returns True, False or None (not applicable)


def _iir_bound(p: Poset) -> bool:
    # search one label beyond n so the bound is tested rather than assumed
    return max(g for (g, _), _ in solvers.irreducible_profiles(p, p.n + 1)) <= p.n


def _param_chain(p: Poset) -> bool:
    r = _brute(p)
    return r.ch <= r.dim2 <= r.cw <= r.iir <= p.n


def _char_iir(p: Poset) -> bool:
    return in_miir(p).holds == (_brute(p).iir == p.n)


def _char_dim2(p: Poset) -> bool:
    return in_mtd(p).holds == (_brute(p).dim2 == p.n)


def _char_cw(p: Poset) -> bool:
    return in_mcw(p).holds == (_brute(p).cw == p.n)


def _unique_minimal(p: Poset) -> bool | None:
    if not p.has_unique_minimal():
        return None
    return all(g <= p.n - 1 for (g, _), _ in solvers.irreducible_profiles(p, p.n + 1))


def _irreducible_downsets(p: Poset) -> bool:
    sizes = tuple(popcount(p.down_mask(x)) for x in range(p.n))
    for (g, s), _ in solvers.irreducible_profiles(p, p.n + 1):
        if g == p.n and s != sizes:
            return False
    return True


def _full_ground_isomorphic(p: Poset) -> bool | None:
    if _brute(p).iir != p.n:
        return None
    canon = canonical_representation(p)
    return all(representations_isomorphic(p, r, canon) for r in solvers.irreducible_representations(p, p.n))


def _miir_canonical(p: Poset) -> bool:
    return (_brute(p).iir == p.n) == solvers.is_irreducible(p, canonical_representation(p)).irreducible


def _chain_blocks(p: Poset) -> bool:
    return _brute(p).iir <= p.n - _chain_block_count(p)


def _block_cuts(p: Poset) -> Iterable[tuple[Poset, Poset]]:
    dec = block_decomposition(p)
    for k in range(1, len(dec)):
        yield vertical_sum(list(dec.parts[:k])), vertical_sum(list(dec.parts[k:]))


def _vertical_sum_formulas(p: Poset) -> bool | None:
    cuts = list(_block_cuts(p))
    if not cuts:
        return None
    whole = _brute(p)
    for low, up in cuts:
        lo, hi = _brute(low), _brute(up)
        expect = (lo.dim2 + hi.ch, lo.dim2 + hi.dim2, lo.dim2 + hi.cw, lo.iir + hi.iir)
        if expect != (whole.ch, whole.dim2, whole.cw, whole.iir):
            return False
    return True


def _decomposition_agrees(p: Poset) -> bool | None:
    if len(block_decomposition(p)) == 1:
        return None
    fast = solvers.params_via_block_decomposition(p)
    whole = _brute(p)
    if (fast.ch, fast.dim2, fast.cw, fast.iir) != (whole.ch, whole.dim2, whole.cw, whole.iir):
        return False
    return all(validate_representation(p, w).valid for w in fast.witnesses.values())


def _disjoint_pairs(max_total: int) -> Iterable[tuple[Poset, Poset]]:
    pools = {n: list(enumerate_posets(n)) for n in range(1, max_total)}
    for n1 in range(1, max_total):
        for n2 in range(n1, max_total - n1 + 1):
            for i, a in enumerate(pools[n1]):
                for j, b in enumerate(pools[n2]):
                    if n1 == n2 and j < i:
                        continue
                    yield a, b


def _disjoint_sum_rules(pair: tuple[Poset, Poset]) -> bool:
    a, b = pair
    s = disjoint_sum([a, b])
    whole, pa, pb = _brute(s), _brute(a), _brute(b)
    m = sum(1 for q in (a, b) if q.has_unique_minimal())
    if whole.dim2 > pa.dim2 + pb.dim2 + m:
        return False
    if whole.cw > pa.cw + pb.cw + m:
        return False
    if whole.iir > pa.iir + pb.iir + m:
        return False
    return whole.ch == solvers.disjoint_sum_cube_height([a, b])


def _key_step(p: Poset, reps: int, seed: int) -> bool | None:
    admissible = [y for y in range(p.n) if p.down_mask(y) != p.full]
    if not admissible:
        return None
    rng = random.Random(seed * 1_000_003 + zlib.crc32(repr(p.below).encode()))
    candidates = [canonical_representation(p)] + [random_representation(p, rng) for _ in range(reps)]
    for r in candidates:
        for y in admissible:
            out = key_step_reduce(p, r, y)
            if not validate_representation(p, out).valid:
                return False
            if any(a > b for a, b in zip(out.sizes(), r.sizes())):
                return False
            quot = key_step_quotient(p, r, y)
            limit = solvers.iir(quot.poset)[0] + quot.epsilon + popcount(r.sets[y])
            if out.ground_size > limit:
                return False
    return True


def _deletions(p: Poset) -> Iterable[Poset]:
    for x in range(p.n):
        q = subposet_mask(p, p.full & ~(1 << x))
        if q is not EMPTY:
            yield q


def _dim2_continuity(p: Poset) -> bool | None:
    if p.n < 2:
        return None
    d = _brute(p).dim2
    return all(0 <= d - _brute(q).dim2 <= 2 for q in _deletions(p))


def _ch_monotone(p: Poset) -> bool | None:
    if p.n < 2:
        return None
    h = _brute(p).ch
    return all(_brute(q).ch <= h for q in _deletions(p))


def _cw_ch(p: Poset) -> bool | None:
    r = _brute(p)
    if r.cw != p.n:
        return None
    return r.ch == max(popcount(p.down_mask(x)) for x in range(p.n))


def _blockwise_full(p: Poset) -> bool | None:
    dec = block_decomposition(p)
    if len(dec) == 1:
        return None
    whole = _brute(p)
    vals = [_brute(q) for q in dec.parts]
    all_dim2 = all(v.dim2 == q.n for v, q in zip(vals, dec.parts))
    lower_dim2 = all(v.dim2 == q.n for v, q in zip(vals[:-1], dec.parts[:-1]))
    last_cw = vals[-1].cw == dec.parts[-1].n
    return (whole.dim2 == p.n) == all_dim2 and (whole.cw == p.n) == (lower_dim2 and last_cw)


def _miir_upsets(p: Poset) -> bool | None:
    if not in_miir(p).holds:
        return None
    for m in _up_sets(p):
        if not in_nmiir(subposet_mask(p, m)).holds:
            return False
    return True


def _miir_components(p: Poset) -> bool | None:
    if not in_miir(p).holds:
        return None
    dec = component_decomposition(p)
    if len(dec) == 1:
        return None
    nontrivial = sum(1 for q in dec.parts if q.n > 1)
    return nontrivial <= 1 and all(in_nmiir(q).holds for q in dec.parts)


def _three_props_downset(p: Poset) -> bool | None:
    if not (check_property(p, "no-block-is-chain").holds and check_property(p, "parallel-pair").holds):
        return None
    reps = solvers.irreducible_representations(p, p.n)
    if not reps:
        return None
    for r in reps:
        for m in _down_sets(p):
            keep = list(bits(m))
            if any(popcount(r.sets[x]) != popcount(p.down_mask(x)) for x in keep):
                continue
            q = subposet_mask(p, m)
            if not representations_isomorphic(q, _restrict(r, keep), canonical_representation(q)):
                return False
    return True


def _class_containment(p: Poset) -> bool:
    mtd, mcw, miir = in_mtd(p).holds, in_mcw(p).holds, in_miir(p).holds
    return (not mtd or mcw) and (not mcw or miir)


def _vertical_irreducibility(p: Poset) -> bool | None:
    cuts = list(_block_cuts(p))
    if not cuts:
        return None
    low, up = cuts[0]
    whole = vertical_sum([low, up])

    def options(q: Poset) -> list[Representation]:
        out = [r for _, r in solvers.irreducible_profiles(q)]
        out.append(canonical_representation(q))
        return out

    for rl in options(low):
        for ru in options(up):
            try:
                composed = compose_vertical_reps([(low, rl), (up, ru)])
            except InvalidRepresentation:
                continue
            parts_irr = solvers.is_irreducible(low, rl).irreducible and solvers.is_irreducible(up, ru).irreducible
            if solvers.is_irreducible(whole, composed).irreducible != parts_irr:
                return False
            if len(block_decomposition(whole)) == 2:
                back = split_block_reps(whole, composed)
                if not (representations_isomorphic(low, back[0], rl) and representations_isomorphic(up, back[1], ru)):
                    return False
    return True


def _component_round_trip(pair: tuple[Poset, Poset]) -> bool:
    a, b = pair
    s = disjoint_sum([a, b])
    ra, rb = canonical_representation(a), canonical_representation(b)
    composed = compose_disjoint_reps([(a, ra), (b, rb)])
    if not validate_representation(s, composed).valid:
        return False
    pieces = split_component_reps(s, composed)
    return all(validate_representation(q, r).valid for q, r in zip(component_decomposition(s).parts, pieces))


def _sigma_miir(spec) -> bool:
    return in_miir(gen_sigma(spec)).holds


# ---------------------------------------------------------------------------
# report-only experiments


def example_1_4_resolution() -> dict:
    """Fast-path values at ``t = 3`` and the exhaustive decision of iir at ``t = 2``."""
    out = {}
    start = time.perf_counter()
    big = solvers.params_via_block_decomposition(gen_example_1_4(3))
    out["t3"] = {"n": 36, "ch": big.ch, "dim2": big.dim2, "cw": big.cw, "seconds": time.perf_counter() - start}
    p = gen_example_1_4(2)
    s = comb(5, 2)
    canon_irr = solvers.is_irreducible(p, canonical_representation(p), cap=p.n).irreducible
    singletons = Representation.from_masks(
        tuple(str(i + 1) for i in range(s)), [1 << i for i in range(s)] + [(1 << s) - 1]
    )
    single_irr = solvers.is_irreducible(p, singletons, cap=p.n).irreducible
    # iir = n iff the canonical representation is irreducible; an irreducible
    # representation with s labels pins the value otherwise
    if canon_irr:
        value = p.n
    elif single_irr:
        value = s
    else:
        value = None
    out["t2"] = {
        "n": p.n,
        "s": s,
        "canonical_irreducible": canon_irr,
        "singletons_irreducible": single_irr,
        "iir": value,
        "supports": "iir = s" if value == s else ("iir = 2t+1" if value == 5 else "neither"),
        "fast_path_iir": solvers.params_via_block_decomposition(p).iir,
    }
    return out


def sigma_height_two_census(max_n: int = 6) -> dict:
    """Height-2 MIIR posets that are both a block and a component, versus sigma posets."""
    sigmas = [gen_sigma(spec) for spec in sigma_specs(max_n)]
    forms = {canonical_form(q) for q in sigmas}
    found = matched = wide = wide_matched = 0
    for n in range(2, max_n + 1):
        for p in enumerate_posets(n):
            if _height(p) != 2 or not in_miir(p).holds:
                continue
            if len(block_decomposition(p)) != 1 or len(component_decomposition(p)) != 1:
                continue
            hit = canonical_form(p) in forms
            found += 1
            matched += hit
            if len(p.minimal) >= 3 and len(p.maximal) >= 3:
                wide += 1
                wide_matched += hit
    return {
        "max_n": max_n,
        "height_two_miir_block_components": found,
        "sigma_isomorphic": matched,
        "with_three_minimal_and_maximal": wide,
        "with_three_minimal_and_maximal_sigma_isomorphic": wide_matched,
    }


# ---------------------------------------------------------------------------
# driver


def run_verify(config: VerifyConfig = VerifyConfig(), progress: Callable[[CheckResult], None] | None = None,
               only: Iterable[str] | None = None) -> VerifyReport:
    base = [p for n in range(1, config.max_n + 1) for p in enumerate_posets(n)]
    extended = list(base)
    if config.max_n < 6 and config.sample_n6:
        extended += sample_posets(6, config.sample_n6, config.seed)
    pair_total = config.max_n + 1
    key_reps = 20

    plan: list[tuple[str, Iterable, Callable]] = [
        ("enumeration", [n for n in range(1, config.max_n + 1)], _enumeration_closure),
        ("iir-bound", base, _iir_bound),
        ("parameter-chain", extended, _param_chain),
        ("char-iir", extended, _char_iir),
        ("char-dim2", base, _char_dim2),
        ("char-cw", base, _char_cw),
        ("unique-minimal-bound", base, _unique_minimal),
        ("full-ground-sizes", base, _irreducible_downsets),
        ("full-ground-isomorphic", base, _full_ground_isomorphic),
        ("miir-canonical", base, _miir_canonical),
        ("chain-block-bound", base, _chain_blocks),
        ("vertical-sum", base, _vertical_sum_formulas),
        ("decomposition-agrees", base, _decomposition_agrees),
        ("vertical-irreducibility", base, _vertical_irreducibility),
        ("disjoint-sum", lambda: _disjoint_pairs(pair_total), _disjoint_sum_rules),
        ("component-round-trip", lambda: _disjoint_pairs(pair_total), _component_round_trip),
        ("key-step", base, lambda p: _key_step(p, key_reps, config.seed)),
        ("dim2-continuity", base, _dim2_continuity),
        ("ch-monotone", base, _ch_monotone),
        ("cw-ch", base, _cw_ch),
        ("blockwise-full", base, _blockwise_full),
        ("miir-upsets", base, _miir_upsets),
        ("miir-components", base, _miir_components),
        ("three-props-downset", base, _three_props_downset),
        ("class-containment", base, _class_containment),
        ("sigma-miir", lambda: sigma_specs(10), _sigma_miir),
    ]
    wanted = None if only is None else set(only)
    checks = []
    for name, items, test in plan:
        if wanted is not None and name not in wanted:
            continue
        if callable(items):
            items = items()
        describe = _describe
        if name in ("disjoint-sum", "component-round-trip"):
            describe = lambda pair: " + ".join(_describe(q) for q in pair)  # noqa: E731
        elif name == "sigma-miir":
            describe = repr
        elif name == "enumeration":
            describe = lambda n: f"n={n}"  # noqa: E731
        result = _Tally(name, config.time_budget).run(items, test, describe)
        checks.append(result)
        if progress:
            progress(result)
    if wanted is None or "example-1-4" in wanted:
        res = CheckResult("example-1-4")
        res.notes = example_1_4_resolution()
        t3 = res.notes["t3"]
        if (t3["ch"], t3["dim2"], t3["cw"]) == (7, 7, 7) and res.notes["t2"]["iir"] is not None:
            res.passed = 1
        else:
            res.failed = 1
            res.failure = "example values differ"
        checks.append(res)
        if progress:
            progress(res)
    if wanted is None or "sigma-census" in wanted:
        res = CheckResult("sigma-census", passed=1, notes=sigma_height_two_census(6))
        checks.append(res)
        if progress:
            progress(res)
    return VerifyReport(config, checks, len(extended))


def _enumeration_closure(n: int) -> bool:
    forms = [canonical_form(p) for p in enumerate_posets(n)]
    if len(set(forms)) != len(forms):
        return False
    return canonical_form(chain(n)) in forms and canonical_form(antichain(n)) in forms


__all__ = [
    "CheckResult",
    "SCHEMA",
    "VerifyConfig",
    "VerifyReport",
    "example_1_4_resolution",
    "run_verify",
    "sigma_height_two_census",
]
