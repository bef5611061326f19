"""Named poset families, the sigma construction, and exhaustive enumeration."""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Iterator

from .poset import Poset, bits, canonical_form, disjoint_sum, vertical_sum
from .representation import Representation

MAX_ENUMERATION = 7
MAX_EXAMPLE_ELEMENTS = 1 << 16


def chain(k: int) -> Poset:
    if k < 1:
        raise ValueError("a chain needs at least one element")
    return Poset.from_below([(1 << i) - 1 for i in range(k)])


def antichain(k: int) -> Poset:
    if k < 1:
        raise ValueError("an antichain needs at least one element")
    return Poset.from_below([0] * k)


def single() -> Poset:
    return chain(1)


def gen_basic(kind: str, size: int = 1) -> Poset:
    """``chain``, ``antichain``, ``v``, ``lambda``, ``z`` or ``b`` (a chain of ``size`` plus a point)."""
    if kind == "chain":
        return chain(size)
    if kind == "antichain":
        return antichain(size)
    if kind == "v":
        return Poset(("bottom", "a", "b"), (0, 1, 1))
    if kind == "lambda":
        return Poset(("a", "b", "top"), (0, 0, 3))
    if kind == "z":
        return disjoint_sum([chain(2), single(), single()])
    if kind == "b":
        if size < 2:
            raise ValueError("the chain in C+T needs at least two elements")
        return Poset.from_below([(1 << i) - 1 for i in range(size)] + [0])
    raise ValueError(f"unknown kind {kind!r}")


def gen_example_1_4(t: int) -> Poset:
    """An antichain of ``C(2t+1, t)`` elements below a single top element."""
    if t < 1:
        raise ValueError("t must be positive")
    s = comb(2 * t + 1, t)
    if s + 1 > MAX_EXAMPLE_ELEMENTS:
        raise ValueError(f"C(2t+1, t) = {s} exceeds the supported size")
    return vertical_sum([antichain(s), single()])


@dataclass(frozen=True)
class SigmaSpec:
    n: int
    a: tuple[int, ...]

    def __post_init__(self):
        a = tuple(self.a)
        object.__setattr__(self, "a", a)
        m = len(a)
        if self.n < 3 or m < 3:
            raise ValueError("both the number of minimal and maximal elements must be at least 3")
        if any(v < 1 for v in a) or any(u > v for u, v in zip(a, a[1:])):
            raise ValueError("the sequence must be non-decreasing and positive")
        if not a[0] < self.n:
            raise ValueError("the first term must be smaller than n")
        if not a[-2] == a[-1] == self.n:
            raise ValueError("the last two terms must equal n")


def gen_sigma(spec: SigmaSpec) -> Poset:
    """Height-2 poset: ``x_i < y_j`` iff ``i <= a_j`` (1-based)."""
    n, a = spec.n, spec.a
    labels = [f"x{i}" for i in range(1, n + 1)] + [f"y{j}" for j in range(1, len(a) + 1)]
    below = [0] * n + [(1 << aj) - 1 for aj in a]
    return Poset(tuple(labels), tuple(below))


def sigma_specs(max_elements: int) -> Iterator[SigmaSpec]:
    """Every valid sigma sequence whose poset has at most ``max_elements`` elements."""
    for n in range(3, max_elements - 2):
        for m in range(3, max_elements - n + 1):
            # a_1..a_{m-2} non-decreasing in [1, n], a_1 < n, then n, n
            for head in _nondecreasing(m - 2, 1, n):
                if head[0] < n:
                    yield SigmaSpec(n, head + (n, n))


def _nondecreasing(length: int, lo: int, hi: int) -> Iterator[tuple[int, ...]]:
    if length == 0:
        yield ()
        return
    for v in range(lo, hi + 1):
        for rest in _nondecreasing(length - 1, v, hi):
            yield (v,) + rest


FIGURE_2_SIGMA = SigmaSpec(8, (1, 1, 1, 2, 2, 2, 2, 4, 4, 4, 8, 8))


def gen_equivalence_example(s: int, i: int) -> tuple[Poset, Representation]:
    """Two-level poset whose representations for different ``i`` are equivalent but not isomorphic.

    The ``C(2s, s)`` minimal elements get the ``s``-subsets of ``{1..2s}``;
    one maximal element gets ``{1..s+1}``, the other ``{i..i+s}``.  Minimal
    elements are ordered so that the labeled poset does not depend on ``i``:
    first the ``s + 1`` below the first maximal, then the ``s + 1`` below the
    second, then the rest in colex order.
    """
    if s < 3:
        raise ValueError("s must be at least 3")
    if not 3 <= i <= s:
        raise ValueError("i must satisfy 3 <= i <= s")
    first = sum(1 << (k - 1) for k in range(1, s + 2))
    second = sum(1 << (k - 1) for k in range(i, i + s + 1))
    subsets = sorted((sum(1 << v for v in c) for c in combinations(range(2 * s), s)), key=_colex_key)
    under_first = [m for m in subsets if m & ~first == 0]
    under_second = [m for m in subsets if m & ~second == 0]
    if set(under_first) & set(under_second):
        raise ValueError("the two maximal elements share a lower cover")
    rest = [m for m in subsets if m not in set(under_first) | set(under_second)]
    minimal_sets = under_first + under_second + rest
    t = len(minimal_sets)
    k = s + 1
    below = [0] * t + [(1 << k) - 1, ((1 << k) - 1) << k]
    labels = [f"m{j}" for j in range(t)] + ["top1", "top2"]
    poset = Poset(tuple(labels), tuple(below))
    ground = tuple(str(v) for v in range(1, 2 * s + 1))
    rep = Representation(ground, tuple(minimal_sets) + (first, second))
    return poset, rep


def _colex_key(m: int) -> list[int]:
    return sorted(bits(m), reverse=True)


# ---------------------------------------------------------------------------
# enumeration


def _down_sets(p: Poset) -> Iterator[int]:
    for m in range(p.full + 1):
        if all(p.below[x] & ~m == 0 for x in bits(m)):
            yield m


def enumerate_posets(n: int) -> Iterator[Poset]:
    """Every poset on ``n`` elements up to isomorphism, in canonical-form order.

    Posets of size ``n`` arise from those of size ``n - 1`` by adding a new
    maximal element above an arbitrary down set.
    """
    if not 1 <= n <= MAX_ENUMERATION:
        raise ValueError(f"n must lie in 1..{MAX_ENUMERATION}")
    for form in _forms(n):
        yield Poset.from_below(form)


_FORM_CACHE: dict[int, tuple[tuple[int, ...], ...]] = {}


def _forms(n: int) -> tuple[tuple[int, ...], ...]:
    if n in _FORM_CACHE:
        return _FORM_CACHE[n]
    if n == 1:
        out = ((0,),)
    else:
        seen = set()
        for form in _forms(n - 1):
            smaller = Poset.from_below(form)
            for d in _down_sets(smaller):
                seen.add(canonical_form(Poset.from_below(form + (d,))))
        out = tuple(sorted(seen))
    _FORM_CACHE[n] = out
    return out


def count_posets(n: int) -> int:
    return len(_forms(n))


def sample_posets(n: int, k: int, seed: int = 0) -> list[Poset]:
    """``k`` distinct isomorphism types of size ``n`` drawn uniformly with a seeded generator."""
    pool = list(enumerate_posets(n))
    rng = random.Random(seed)
    picks = sorted(rng.sample(range(len(pool)), min(k, len(pool))))
    return [pool[j] for j in picks]


def random_representation(p: Poset, rng: random.Random, extra: int = 3) -> Representation:
    """A seeded random valid representation of ``p``.

    Starts from the principal up sets (the columns of the canonical
    representation) plus ``extra`` random up sets, then drops a random selection of
    columns as long as the family still separates every pair.
    """
    upsets = []
    for _ in range(extra):
        seed_mask = rng.getrandbits(p.n) & p.full
        m = seed_mask
        for x in bits(seed_mask):
            m |= p.above[x]
        if m:
            upsets.append(m)
    columns = [p.up_mask(x, closed=True) for x in range(p.n)] + upsets
    rng.shuffle(columns)
    keep = list(columns)
    for col in columns:
        if rng.random() < 0.3:
            continue
        trial = list(keep)
        trial.remove(col)
        if _separates(p, trial):
            keep = trial
    ground = tuple(str(i + 1) for i in range(len(keep)))
    masks = [0] * p.n
    for i, col in enumerate(keep):
        for x in bits(col):
            masks[x] |= 1 << i
    return Representation.from_masks(ground, masks)


def _separates(p: Poset, columns: list[int]) -> bool:
    for x in range(p.n):
        for y in range(p.n):
            if x != y and not p.lt(x, y):
                if not any(c >> x & 1 and not c >> y & 1 for c in columns):
                    return False
    return True
