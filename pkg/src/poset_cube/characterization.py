"""Polynomial-time property checks and class membership tests.

``in_miir``, ``in_mtd`` and ``in_mcw`` decide whether the maximum irreducible
ground size, the 2-dimension and the cube width of a poset equal its size.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from .poset import Poset, block_decomposition, component_decomposition, popcount, vertical_sum

PROPERTIES = ("no-block-is-chain", "two-down", "parallel-pair")


@dataclass(frozen=True)
class PropertyReport:
    property: str
    holds: bool
    witness: Any = None

    def __bool__(self) -> bool:
        return self.holds


def _subset(a: int, b: int) -> bool:
    return a & ~b == 0


def two_down_partner(p: Poset, y: int) -> int | None:
    """Least ``z`` incomparable to ``y`` whose open down set contains that of ``y``."""
    for z in range(p.n):
        if p.incomparable(y, z) and _subset(p.below[y], p.below[z]):
            return z
    return None


def parallel_pair_ok(p: Poset, x: int, y: int) -> bool:
    """Whether the incomparable pair ``x, y`` satisfies one of the two alternatives."""
    return _pp_side(p, x, y) or _pp_side(p, y, x)


def _pp_side(p: Poset, x: int, y: int) -> bool:
    # some y' >= y with D(x) inside D(y') and y' incomparable to x
    for yp in range(p.n):
        if p.le(y, yp) and p.incomparable(x, yp) and _subset(p.below[x], p.below[yp]):
            return True
    return False


def no_block_is_chain_violation(p: Poset) -> int | None:
    for x in range(p.n):
        if popcount(p.below[x] | p.above[x]) == p.n - 1:
            return x
    return None


def two_down_violation(p: Poset) -> int | None:
    for y in range(p.n):
        if popcount(p.cover_below[y]) >= 2 and two_down_partner(p, y) is None:
            return y
    return None


def parallel_pair_violation(p: Poset) -> tuple[int, int] | None:
    for x in range(p.n):
        for y in range(x + 1, p.n):
            if p.incomparable(x, y) and not parallel_pair_ok(p, x, y):
                return (x, y)
    return None


_CHECKS = {
    "no-block-is-chain": no_block_is_chain_violation,
    "two-down": two_down_violation,
    "parallel-pair": parallel_pair_violation,
}


def check_property(p: Poset, which: str) -> PropertyReport:
    """Evaluate one of the three properties; on failure the witness is the least violation."""
    try:
        finder = _CHECKS[which]
    except KeyError:
        raise ValueError(f"unknown property {which!r}; expected one of {PROPERTIES}") from None
    bad = finder(p)
    return PropertyReport(which, bad is None, bad)


def in_miir(p: Poset) -> PropertyReport:
    """All three properties hold, i.e. the canonical representation is irreducible."""
    for which in PROPERTIES:
        rep = check_property(p, which)
        if not rep.holds:
            return PropertyReport("miir", False, (which, rep.witness))
    return PropertyReport("miir", True)


def in_nmiir(p: Poset) -> PropertyReport:
    """MIIR, or the first block is a chain and every later block is in MIIR."""
    if in_miir(p).holds:
        return PropertyReport("nmiir", True, "miir")
    dec = block_decomposition(p)
    if not dec.parts[0].is_chain():
        return PropertyReport("nmiir", False, ("first block is not a chain", 0))
    for i, q in enumerate(dec.parts[1:], start=1):
        if not in_miir(q).holds:
            return PropertyReport("nmiir", False, ("block not in miir", i))
    return PropertyReport("nmiir", True, "leading chain block")


def _component_shapes(p: Poset) -> list[tuple[int, bool]]:
    return sorted((q.n, q.is_chain()) for q in component_decomposition(p).parts)


def classify_block_class(p: Poset) -> set[str]:
    """Subset of ``{"A", "A234", "B", "Z"}`` the poset belongs to."""
    out = set()
    if p.is_antichain() and p.n >= 2:
        out.add("A")
        if p.n <= 4:
            out.add("A234")
    shapes = _component_shapes(p)
    if len(shapes) == 2 and shapes[0] == (1, True) and shapes[1][0] >= 2 and shapes[1][1]:
        out.add("B")
    if p.n == 4 and shapes == [(1, True), (1, True), (2, True)]:
        out.add("Z")
    return out


def _blocks_in(p: Poset, allowed: set[str], blocks=None) -> PropertyReport:
    dec = block_decomposition(p) if blocks is None else blocks
    for i, q in enumerate(dec.parts):
        if not classify_block_class(q) & allowed:
            return PropertyReport("", False, ("block outside the allowed classes", i))
    return PropertyReport("", True, [list(q.labels) for q in dec.parts])


def in_mtd(p: Poset) -> PropertyReport:
    """Every block lies in A234, B or is Z."""
    rep = _blocks_in(p, {"A234", "B", "Z"})
    return PropertyReport("mtd", rep.holds, rep.witness)


def in_mcw(p: Poset) -> PropertyReport:
    """The last block lies in A, B or is Z, and the blocks before it form an MTD poset."""
    dec = block_decomposition(p)
    last = dec.parts[-1]
    if not classify_block_class(last) & {"A", "B", "Z"}:
        return PropertyReport("mcw", False, ("last block outside A, B, Z", len(dec) - 1))
    if len(dec) > 1:
        head = vertical_sum(list(dec.parts[:-1]))
        rep = in_mtd(head)
        if not rep.holds:
            return PropertyReport("mcw", False, ("lower blocks not in mtd", rep.witness))
    return PropertyReport("mcw", True, [list(q.labels) for q in dec.parts])


CLASS_CHECKS = {
    "no-chain-block": lambda p: check_property(p, "no-block-is-chain"),
    "no-block-is-chain": lambda p: check_property(p, "no-block-is-chain"),
    "two-down": lambda p: check_property(p, "two-down"),
    "parallel-pair": lambda p: check_property(p, "parallel-pair"),
    "miir": in_miir,
    "nmiir": in_nmiir,
    "mtd": in_mtd,
    "mcw": in_mcw,
}
