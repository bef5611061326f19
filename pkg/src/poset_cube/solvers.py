"""Exact cube height, 2-dimension, cube width and maximum irreducible ground size.

Brute force works on *columns*.  For a label ``a`` of a representation, its
column is the set of elements whose set contains ``a``; it is always a
non-empty up-set.  A family of up-sets is a representation (up to renaming
labels) iff for every pair ``x`` not below-or-equal ``y`` some column contains
``x`` but not ``y``.  Twin columns and the full column can be dropped from any
representation without growing a set, so searches range over families of
distinct proper up-sets.

The profile of a family is ``(ground size, set sizes)``.  A representation is
irreducible iff its profile is Pareto-minimal among all realizable profiles,
so all four parameters come out of the set of minimal profiles.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Sequence

from .poset import Poset, bits, block_decomposition, popcount
from .representation import (
    Representation,
    canonical_representation,
    compare_representations,
    compose_vertical_reps,
    embed_parts,
    key_step_reduce,
    require_valid,
    strict_reduction_from_violation,
)

MAX_GROUND = 64
_FIELD = 8
_FIELD_GUARD = 1 << (_FIELD - 1)


def default_cap() -> int:
    return int(os.environ.get("POSET_CUBE_CAP", "8"))


class CapExceeded(RuntimeError):
    """The instance is too large for exhaustive search and no fast path applies."""


def _check_cap(p: Poset, cap: int | None) -> None:
    cap = default_cap() if cap is None else cap
    if p.n > cap:
        raise CapExceeded(f"poset has {p.n} elements; exhaustive search is capped at {cap}")


# ---------------------------------------------------------------------------
# column search


class ColumnSpace:
    """Proper non-empty up-sets of a poset and the pairs they must separate."""

    def __init__(self, below: tuple[int, ...]):
        p = Poset.from_below(below)
        n = p.n
        self.n = n
        full = p.full
        above = p.above
        upsets = []
        for m in range(1, full):
            ok = True
            for x in bits(m):
                if above[x] & ~m:
                    ok = False
                    break
            if ok:
                upsets.append(m)
        # smaller columns first keeps set sizes low in the first solutions found
        upsets.sort(key=lambda m: (popcount(m), m))
        self.columns = upsets
        self.pairs = [(x, y) for x in range(n) for y in range(n) if x != y and not p.lt(x, y)]
        self.sep = []
        for m in upsets:
            s = 0
            for k, (x, y) in enumerate(self.pairs):
                if m >> x & 1 and not m >> y & 1:
                    s |= 1 << k
            self.sep.append(s)
        self.for_pair = [
            [c for c in range(len(upsets)) if self.sep[c] >> k & 1] for k in range(len(self.pairs))
        ]
        self.all_pairs = (1 << len(self.pairs)) - 1


@lru_cache(maxsize=4096)
def column_space(below: tuple[int, ...]) -> ColumnSpace:
    return ColumnSpace(below)


class _Search:
    """Depth-first enumeration of separating column families within budgets.

    Every inclusion-minimal separating family within the budgets is produced
    exactly once: the search branches on the first unseparated pair and, in
    the branch for a column, forbids the columns of earlier sibling branches.
    """

    def __init__(self, space: ColumnSpace, max_ground: int, caps: Sequence[int], mode: str,
                 seeds: Sequence[tuple[tuple[int, tuple[int, ...]], tuple[int, ...]]] = ()):
        self.space = space
        self.max_ground = max_ground
        self.caps = list(caps)
        self.mode = mode  # "first", "all" or "frontier"
        self.results: list[tuple[int, ...]] = []
        self.found: list[tuple[int, tuple[int, ...]]] = []
        self.found_families: list[tuple[int, ...]] = []
        # packed (ground, counts) vectors of the current Pareto front
        self._front: list[int] = []
        self._guard = sum(_FIELD_GUARD << (_FIELD * i) for i in range(space.n + 1))
        for prof, fam in seeds:
            self._record(prof, fam)
        self.nodes = 0

    def run(self) -> None:
        sp = self.space
        self._done = False
        counts = [0] * sp.n
        sat = 0
        for x in range(sp.n):
            if self.caps[x] <= 0:
                sat |= 1 << x
        self._dfs(sp.all_pairs, [], counts, sat, 0)

    def _pack(self, g: int, counts: Sequence[int]) -> int:
        v = g
        for i, c in enumerate(counts, start=1):
            v |= c << (_FIELD * i)
        return v

    def _leq(self, a: int, b: int) -> bool:
        # fieldwise a <= b: no borrow crosses a guard bit
        h = self._guard
        return ((b | h) - a) & h == h

    def _dominated(self, g: int, counts: Sequence[int]) -> bool:
        v = self._pack(g, counts)
        return any(self._leq(f, v) for f in self._front)

    def _record(self, prof: tuple[int, tuple[int, ...]], fam: tuple[int, ...]) -> None:
        v = self._pack(*prof)
        if any(self._leq(f, v) and f != v for f in self._front):
            return
        keep = [i for i, f in enumerate(self._front) if not self._leq(v, f) or f == v]
        self._front = [self._front[i] for i in keep] + [v]
        self.found = [self.found[i] for i in keep] + [prof]
        self.found_families = [self.found_families[i] for i in keep] + [fam]

    def _dfs(self, unsep: int, chosen: list[int], counts: list[int], sat: int, excluded: int) -> None:
        if self._done:
            return
        self.nodes += 1
        sp = self.space
        if not unsep:
            fam = tuple(sp.columns[c] for c in chosen)
            if self.mode == "frontier":
                self._record((len(chosen), tuple(counts)), fam)
            else:
                self.results.append(fam)
                if self.mode == "first":
                    self._done = True
            return
        g = len(chosen)
        if g >= self.max_ground:
            return
        if self.mode == "frontier" and self._dominated(g, counts):
            return
        cols = sp.columns
        # every unseparated pair still needs an admissible column
        cover = 0
        for c in range(len(cols)):
            if not (excluded >> c & 1) and not (cols[c] & sat):
                cover |= sp.sep[c]
        if unsep & ~cover:
            return
        k = (unsep & -unsep).bit_length() - 1
        local_excl = excluded
        for c in sp.for_pair[k]:
            if local_excl >> c & 1 or cols[c] & sat:
                continue
            m = cols[c]
            new_counts = list(counts)
            new_sat = sat
            for x in bits(m):
                new_counts[x] += 1
                if new_counts[x] >= self.caps[x]:
                    new_sat |= 1 << x
            chosen.append(c)
            self._dfs(unsep & ~sp.sep[c], chosen, new_counts, new_sat, local_excl)
            chosen.pop()
            if self._done:
                return
            local_excl |= 1 << c


def family_to_representation(n: int, family: Sequence[int]) -> Representation:
    """Labels ``1..g`` in column order; element ``x`` gets the labels whose column holds it."""
    ground = [str(i + 1) for i in range(len(family))]
    masks = [0] * n
    for i, col in enumerate(family):
        for x in bits(col):
            masks[x] |= 1 << i
    return Representation(tuple(ground), tuple(masks))


def find_representation(p: Poset, max_ground: int, caps: Sequence[int] | int,
                        cap: int | None = None) -> Representation | None:
    """Some representation with ground at most ``max_ground`` and ``|S_x| <= caps[x]``."""
    _check_cap(p, cap)
    if isinstance(caps, int):
        caps = [caps] * p.n
    s = _Search(column_space(p.below), max_ground, caps, "first")
    s.run()
    if not s.results:
        return None
    return family_to_representation(p.n, s.results[0])


def all_representations(p: Poset, max_ground: int, caps: Sequence[int] | int,
                        cap: int | None = None) -> list[Representation]:
    """Every inclusion-minimal column family within the budgets, as representations."""
    _check_cap(p, cap)
    if isinstance(caps, int):
        caps = [caps] * p.n
    s = _Search(column_space(p.below), max_ground, caps, "all")
    s.run()
    return [family_to_representation(p.n, fam) for fam in s.results]


@lru_cache(maxsize=4096)
def _frontier(below: tuple[int, ...], max_ground: int):
    n = len(below)
    p = Poset.from_below(below)
    canon = canonical_representation(p)
    seeds = []
    if n <= max_ground:
        seeds.append((canon.profile(), tuple(canon.columns())))
    s = _Search(column_space(below), max_ground, [max_ground] * n, "frontier", seeds)
    s.run()
    profiles = list(zip(s.found, s.found_families))
    minimal = []
    seen = set()
    for prof, fam in profiles:
        g, c = prof
        if prof in seen:
            continue
        dominated = any(
            (og, oc) != prof and og <= g and all(a <= b for a, b in zip(oc, c))
            for (og, oc), _ in profiles
        )
        if not dominated:
            seen.add(prof)
            minimal.append((prof, fam))
    minimal.sort()
    return tuple(minimal)


def irreducible_profiles(p: Poset, max_ground: int | None = None,
                         cap: int | None = None) -> list[tuple[tuple[int, tuple[int, ...]], Representation]]:
    """Pareto-minimal ``(ground, sizes)`` profiles with ground at most ``max_ground`` (default ``n``).

    Each comes with one irreducible representation realizing it.
    """
    _check_cap(p, cap)
    max_ground = p.n if max_ground is None else max_ground
    out = []
    for prof, fam in _frontier(p.below, max_ground):
        out.append((prof, family_to_representation(p.n, fam)))
    return out


def irreducible_representations(p: Poset, ground: int, cap: int | None = None) -> list[Representation]:
    """All irreducible representations with the given ground size, one per relabeling class."""
    out = []
    for (g, sizes), _ in irreducible_profiles(p, max(ground, p.n), cap):
        if g == ground:
            out.extend(r for r in all_representations(p, g, list(sizes), cap) if r.profile() == (g, sizes))
    return out


# ---------------------------------------------------------------------------
# irreducibility


@dataclass(frozen=True)
class IrreducibilityResult:
    irreducible: bool
    witness: Representation | None = None

    def __bool__(self) -> bool:
        return self.irreducible


def is_irreducible(p: Poset, r: Representation, cap: int | None = None) -> IrreducibilityResult:
    """Exhaustively look for a strict reduction of ``r``.

    A strict reduction either uses fewer labels with no larger set, or the
    same labels with one set strictly smaller; each case is a budgeted search.
    """
    require_valid(p, r)
    if r.ground_size > MAX_GROUND:
        raise CapExceeded(f"ground of {r.ground_size} labels exceeds {MAX_GROUND}")
    _check_cap(p, cap)
    g, sizes = r.profile()
    space = column_space(p.below)
    budgets = [(g - 1, list(sizes))] if g > 0 else []
    for x in range(p.n):
        if sizes[x] > 0:
            b = list(sizes)
            b[x] -= 1
            budgets.append((g, b))
    for max_ground, caps in budgets:
        s = _Search(space, max_ground, caps, "first")
        s.run()
        if s.results:
            return IrreducibilityResult(False, family_to_representation(p.n, s.results[0]))
    return IrreducibilityResult(True)


def _strict_candidates(p: Poset, r: Representation):
    yield canonical_representation(p)
    from .characterization import no_block_is_chain_violation, parallel_pair_violation, two_down_violation

    for kind, finder in (("two-down", two_down_violation), ("parallel-pair", parallel_pair_violation),
                         ("no-block-is-chain", no_block_is_chain_violation)):
        w = finder(p)
        if w is not None:
            yield strict_reduction_from_violation(p, (kind, w))
    sizes = r.sizes()
    for y in range(p.n):
        if p.down_mask(y) != p.full and popcount(p.down_mask(y)) > sizes[y]:
            yield key_step_reduce(p, r, y)


def reduce_to_irreducible(p: Poset, r: Representation, cap: int | None = None) -> Representation:
    """An irreducible reduction of ``r`` (``r`` itself when already irreducible).

    Cheap constructive reductions are tried first; the exhaustive witness
    search runs only when none of them is a strict reduction.
    """
    require_valid(p, r)
    current = r
    while True:
        improved = None
        for cand in _strict_candidates(p, current):
            if compare_representations(p, cand, current).is_strict:
                improved = cand
                break
        if improved is None:
            verdict = is_irreducible(p, current, cap)
            if verdict.irreducible:
                return current
            improved = verdict.witness
        current = improved


# ---------------------------------------------------------------------------
# parameters


@dataclass(frozen=True)
class ParamReport:
    ch: int
    dim2: int
    cw: int
    iir: int
    method: str
    witnesses: dict[str, Representation] = field(default_factory=dict, compare=False)

    def as_dict(self) -> dict:
        return {"ch": self.ch, "dim2": self.dim2, "cw": self.cw, "iir": self.iir, "method": self.method}


def sperner_dim2_antichain(count: int) -> int:
    """Least ``s`` with ``C(s, s // 2) >= count``: the 2-dimension of an antichain."""
    if count < 1:
        raise ValueError("count must be positive")
    s = 0
    while comb(s, s // 2) < count:
        s += 1
    return s


def _colex_subsets(s: int, k: int, count: int) -> list[int]:
    out = []
    m = (1 << k) - 1
    while len(out) < count:
        out.append(m)
        # Gosper's hack yields k-subsets in colex order
        c = m & -m
        r = m + c
        m = (((r ^ m) >> 2) // c) | r
    return out


def closed_form(p: Poset) -> ParamReport | None:
    """Values for chains (including single elements) and antichains; ``None`` otherwise."""
    if p.is_chain():
        w = Representation.from_masks(p.labels, list(p.below))
        k = p.n - 1
        return ParamReport(k, k, k, k, "closed-form", {"ch": w, "dim2": w, "cw": w, "iir": w})
    if p.is_antichain():
        single = canonical_representation(p)
        s = sperner_dim2_antichain(p.n)
        packed = Representation(tuple(str(i + 1) for i in range(s)), tuple(_colex_subsets(s, s // 2, p.n)))
        packed = Representation.from_masks(packed.ground, packed.sets)
        return ParamReport(1, s, p.n, p.n, "closed-form",
                           {"ch": single, "dim2": packed, "cw": single, "iir": single})
    return None


def params_brute(p: Poset, cap: int | None = None, max_ground: int | None = None) -> ParamReport:
    """All four parameters from the Pareto-minimal profiles (ground at most ``n`` by default)."""
    front = irreducible_profiles(p, max_ground, cap)
    ch_prof, ch_rep = min(front, key=lambda e: (max(e[0][1], default=0), e[0]))
    ch = max(ch_prof[1], default=0)
    dim2_prof, dim2_rep = min(front, key=lambda e: e[0])
    cw_prof, cw_rep = min((e for e in front if max(e[0][1], default=0) <= ch), key=lambda e: e[0])
    iir_prof, iir_rep = max(front, key=lambda e: (e[0][0], tuple(-v for v in e[0][1])))
    return ParamReport(ch, dim2_prof[0], cw_prof[0], iir_prof[0], "brute",
                       {"ch": ch_rep, "dim2": dim2_rep, "cw": cw_rep, "iir": iir_rep})


def cube_height(p: Poset, cap: int | None = None) -> tuple[int, Representation]:
    """Least ``h`` admitting a representation with every set of size at most ``h``."""
    fast = closed_form(p)
    if fast is not None:
        return fast.ch, fast.witnesses["ch"]
    _check_cap(p, cap)
    for h in range(p.n + 1):
        r = find_representation(p, p.n, h, cap)
        if r is not None:
            return h, r
    raise AssertionError("the canonical representation bounds the cube height")


def two_dimension(p: Poset, cap: int | None = None) -> tuple[int, Representation]:
    """Least ground size of any representation."""
    fast = closed_form(p)
    if fast is not None:
        return fast.dim2, fast.witnesses["dim2"]
    _check_cap(p, cap)
    for w in range(p.n + 1):
        r = find_representation(p, w, w, cap)
        if r is not None:
            return w, r
    raise AssertionError("the canonical representation bounds the 2-dimension")


def cube_width(p: Poset, cap: int | None = None) -> tuple[int, Representation]:
    """Least ground size among representations whose sets all fit the cube height."""
    fast = closed_form(p)
    if fast is not None:
        return fast.cw, fast.witnesses["cw"]
    _check_cap(p, cap)
    h, _ = cube_height(p, cap)
    for w in range(p.n + 1):
        r = find_representation(p, w, h, cap)
        if r is not None:
            return w, r
    raise AssertionError("a cube height witness reduces to ground at most n")


def iir(p: Poset, cap: int | None = None) -> tuple[int, Representation]:
    """Largest ground size of an irreducible representation."""
    fast = closed_form(p)
    if fast is not None:
        return fast.iir, fast.witnesses["iir"]
    rep = params_brute(p, cap)
    return rep.iir, rep.witnesses["iir"]


def _block_values(q: Poset, cap: int | None) -> ParamReport:
    fast = closed_form(q)
    if fast is not None:
        return fast
    return params_brute(q, cap)


def params_via_block_decomposition(p: Poset, cap: int | None = None) -> ParamReport:
    """Combine per-block values: 2-dimension and iir add up; ch and cw add the lower blocks' 2-dimension."""
    dec = block_decomposition(p)
    vals = [_block_values(q, cap) for q in dec.parts]
    if len(vals) == 1:
        return vals[0]
    lower = sum(v.dim2 for v in vals[:-1])
    last = vals[-1]
    ch = lower + last.ch
    dim2 = lower + last.dim2
    cw = lower + last.cw
    iir_value = sum(v.iir for v in vals)

    def stacked(key_last: str, key_lower: str = "dim2") -> Representation:
        parts = [(q, v.witnesses[key_lower]) for q, v in zip(dec.parts[:-1], vals[:-1])]
        parts.append((dec.parts[-1], last.witnesses[key_last]))
        return embed_parts(dec.embedding, compose_vertical_reps(parts), p.n)

    witnesses = {
        "ch": stacked("ch"),
        "dim2": stacked("dim2"),
        "cw": stacked("cw"),
        "iir": embed_parts(
            dec.embedding,
            compose_vertical_reps([(q, v.witnesses["iir"]) for q, v in zip(dec.parts, vals)]),
            p.n,
        ),
    }
    return ParamReport(ch, dim2, cw, iir_value, "decomposition", witnesses)


def params(p: Poset, method: str = "auto", cap: int | None = None) -> ParamReport:
    """Compute ``(ch, dim2, cw, iir)`` by ``"brute"``, ``"decompose"`` or ``"auto"``."""
    if method == "brute":
        return params_brute(p, cap)
    if method == "decompose":
        return params_via_block_decomposition(p, cap)
    if method != "auto":
        raise ValueError(f"unknown method {method!r}")
    fast = closed_form(p)
    if fast is not None:
        return fast
    if len(block_decomposition(p)) > 1:
        return params_via_block_decomposition(p, cap)
    return params_brute(p, cap)


def disjoint_sum_cube_height(parts: Sequence[Poset], cap: int | None = None) -> int:
    """Cube height of the disjoint sum from the parts' cube heights.

    With ``h0`` the largest part value the result is ``h0``, unless some part
    with a unique minimal element already reaches ``h0``; then it is ``h0 + 1``.
    """
    if len(parts) < 2:
        raise ValueError("a disjoint sum needs at least two parts")
    heights = [params(q, "auto", cap).ch for q in parts]
    h0 = max(heights)
    if any(q.has_unique_minimal() and h == h0 for q, h in zip(parts, heights)):
        return h0 + 1
    return h0
