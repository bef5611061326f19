"""Inclusion representations: validation, comparison, composition and splitting.

A representation assigns to each poset element a finite set of ground labels
such that ``x <= y`` iff ``S_x`` is a subset of ``S_y``.  Sets are stored as
bitmasks over the positions of the ``ground`` tuple.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterable, NamedTuple, Sequence

from .poset import (
    Poset,
    PosetError,
    bits,
    block_decomposition,
    component_decomposition,
    popcount,
    vertical_sum,
)


class InvalidRepresentation(ValueError):
    """Raised when a family of sets is not an inclusion representation of the poset."""


@dataclass(frozen=True)
class Representation:
    ground: tuple[str, ...]
    sets: tuple[int, ...]

    def __post_init__(self):
        if len(set(self.ground)) != len(self.ground):
            raise InvalidRepresentation("duplicate ground label")
        used = 0
        for s in self.sets:
            used |= s
        if used != (1 << len(self.ground)) - 1:
            raise InvalidRepresentation("every ground label must occur in some set")

    @classmethod
    def from_sets(cls, sets: Sequence[Iterable[Any]], ground: Sequence[Any] | None = None) -> "Representation":
        """Build from explicit label sets.  Labels are converted to strings.

        Without ``ground``, labels are ordered by first appearance.  With it,
        labels that no set uses are dropped.
        """
        sets = [[str(a) for a in s] for s in sets]
        if ground is None:
            order: dict[str, None] = {}
            for s in sets:
                for a in sorted(s, key=_label_key):
                    order.setdefault(a, None)
            ground = list(order)
        else:
            ground = [str(a) for a in ground]
            used = {a for s in sets for a in s}
            ground = [a for a in ground if a in used]
        pos = {a: i for i, a in enumerate(ground)}
        masks = []
        for s in sets:
            m = 0
            for a in s:
                if a not in pos:
                    raise InvalidRepresentation(f"label {a!r} is not in the ground set")
                m |= 1 << pos[a]
            masks.append(m)
        return cls(tuple(ground), tuple(masks))

    @classmethod
    def from_masks(cls, ground: Sequence[str], masks: Sequence[int]) -> "Representation":
        """Build from bitmasks over ``ground``, dropping labels no mask uses."""
        used = 0
        for m in masks:
            used |= m
        keep = bits(used)
        if len(keep) == len(ground):
            return cls(tuple(ground), tuple(masks))
        remap = {old: new for new, old in enumerate(keep)}
        packed = []
        for m in masks:
            v = 0
            for b in bits(m):
                v |= 1 << remap[b]
            packed.append(v)
        return cls(tuple(ground[i] for i in keep), tuple(packed))

    @property
    def n(self) -> int:
        return len(self.sets)

    @property
    def ground_size(self) -> int:
        return len(self.ground)

    def size(self, x: int) -> int:
        return popcount(self.sets[x])

    def sizes(self) -> tuple[int, ...]:
        return tuple(popcount(s) for s in self.sets)

    def profile(self) -> tuple[int, tuple[int, ...]]:
        """``(ground size, per-element set sizes)``; reductions compare profiles."""
        return self.ground_size, self.sizes()

    def label_set(self, x: int) -> frozenset[str]:
        return frozenset(self.ground[i] for i in bits(self.sets[x]))

    def label_sets(self) -> list[frozenset[str]]:
        return [self.label_set(x) for x in range(self.n)]

    def columns(self) -> list[int]:
        """For each ground label, the mask of elements whose set contains it."""
        cols = [0] * len(self.ground)
        for x, s in enumerate(self.sets):
            for i in bits(s):
                cols[i] |= 1 << x
        return cols

    def relabel(self, mapping: dict[str, str]) -> "Representation":
        return Representation(tuple(mapping.get(a, a) for a in self.ground), self.sets)

    def to_json(self, p: Poset) -> dict:
        return {
            "ground": list(self.ground),
            "sets": {p.labels[x]: sorted(self.label_set(x), key=_label_key) for x in range(self.n)},
        }

    @classmethod
    def from_json(cls, p: Poset, data: dict) -> "Representation":
        try:
            ground = [str(a) for a in data["ground"]]
            raw = data["sets"]
        except (KeyError, TypeError) as exc:
            raise InvalidRepresentation("representation JSON needs 'ground' and 'sets'") from exc
        if set(raw) != set(p.labels):
            raise InvalidRepresentation("'sets' must have exactly one entry per poset element")
        known = set(ground)
        used: set[str] = set()
        sets = []
        for name in p.labels:
            members = [str(a) for a in raw[name]]
            for a in members:
                if a not in known:
                    raise InvalidRepresentation(f"set of {name!r} uses label {a!r} outside 'ground'")
            used.update(members)
            sets.append(members)
        orphans = [a for a in ground if a not in used]
        if orphans:
            raise InvalidRepresentation(f"ground labels used by no set: {orphans}")
        return cls.from_sets(sets, ground)


def _label_key(a: str):
    return (0, int(a), "") if a.isdigit() else (1, 0, a)


def fresh_labels(used: Iterable[str], count: int) -> list[str]:
    """``count`` labels from the reserved ``@k`` namespace that avoid ``used``."""
    used = set(used)
    out = []
    k = 0
    while len(out) < count:
        name = f"@{k}"
        if name not in used:
            out.append(name)
        k += 1
    return out


# ---------------------------------------------------------------------------
# validation and comparison


class Check(NamedTuple):
    valid: bool
    pair: tuple[int, int] | None = None

    def __bool__(self) -> bool:
        return self.valid


def canonical_representation(p: Poset) -> Representation:
    """Each element gets its closed down set; ground labels are the element labels."""
    return Representation(p.labels, tuple(p.down_mask(x) for x in range(p.n)))


def validate_representation(p: Poset, r: Representation) -> Check:
    """Check ``x <= y`` iff ``S_x <= S_y`` for every ordered pair; report the first failure."""
    if r.n != p.n:
        raise InvalidRepresentation(f"representation has {r.n} sets for a poset of size {p.n}")
    s = r.sets
    for x in range(p.n):
        for y in range(p.n):
            if x == y:
                continue
            subset = s[x] & ~s[y] == 0
            if subset != p.lt(x, y):
                return Check(False, (x, y))
    return Check(True)


def require_valid(p: Poset, r: Representation) -> None:
    check = validate_representation(p, r)
    if not check:
        x, y = check.pair
        raise InvalidRepresentation(
            f"not a representation: inclusion between {p.labels[x]} and {p.labels[y]} "
            "disagrees with the order"
        )


@dataclass(frozen=True)
class ComparisonVerdict:
    is_reduction: bool
    is_strict: bool
    is_equivalent: bool
    witness: tuple | None = None


def is_reduction(r: Representation, r2: Representation) -> bool:
    g1, s1 = r.profile()
    g2, s2 = r2.profile()
    return g1 <= g2 and all(a <= b for a, b in zip(s1, s2))


def compare_representations(p: Poset, r: Representation, r2: Representation) -> ComparisonVerdict:
    """Is ``r`` a (strict) reduction of ``r2``?

    The witness is ``("ground", |r|, |r2|)`` or ``("element", x, |S_x|, |S'_x|)``
    naming where ``r`` exceeds ``r2`` (not a reduction) or drops below it
    (strict reduction).
    """
    require_valid(p, r)
    require_valid(p, r2)
    forward = is_reduction(r, r2)
    backward = is_reduction(r2, r)
    equivalent = forward and backward
    strict = forward and not equivalent
    witness = None
    g1, s1 = r.profile()
    g2, s2 = r2.profile()
    if not forward:
        if g1 > g2:
            witness = ("ground", g1, g2)
        else:
            x = next(x for x in range(p.n) if s1[x] > s2[x])
            witness = ("element", x, s1[x], s2[x])
    elif strict:
        if g1 < g2:
            witness = ("ground", g1, g2)
        else:
            x = next(x for x in range(p.n) if s1[x] < s2[x])
            witness = ("element", x, s1[x], s2[x])
    return ComparisonVerdict(forward, strict, equivalent, witness)


def representation_isomorphism(p: Poset, r: Representation, r2: Representation) -> dict[str, str] | None:
    """A ground bijection carrying every set of ``r`` onto the matching set of ``r2``.

    A bijection ``f`` works iff each label and its image occur in exactly the
    same elements' sets, so labels are matched by membership pattern.
    """
    require_valid(p, r)
    require_valid(p, r2)
    if r.ground_size != r2.ground_size:
        return None
    groups: dict[int, list[str]] = {}
    for label, col in zip(r2.ground, r2.columns()):
        groups.setdefault(col, []).append(label)
    mapping = {}
    for label, col in zip(r.ground, r.columns()):
        bucket = groups.get(col)
        if not bucket:
            return None
        mapping[label] = bucket.pop(0)
    return mapping


def representations_isomorphic(p: Poset, r: Representation, r2: Representation) -> bool:
    return representation_isomorphism(p, r, r2) is not None


# ---------------------------------------------------------------------------
# composition and splitting


def _disjoint_label_maps(reps: Sequence[Representation]) -> list[dict[str, str]]:
    """Rename labels shared between parts so the grounds become disjoint."""
    owners: dict[str, int] = {}
    for i, r in enumerate(reps):
        for a in r.ground:
            owners[a] = owners.get(a, 0) + 1
    taken = set(owners)
    maps = []
    for i, r in enumerate(reps):
        m = {}
        if i:
            for a in r.ground:
                if owners[a] > 1:
                    new = f"{a}#{i}"
                    while new in taken:
                        new += "#"
                    taken.add(new)
                    m[a] = new
        maps.append(m)
    return maps


def _check_parts(parts: Sequence[tuple[Poset, Representation]]) -> list[Representation]:
    if not parts:
        raise PosetError("at least one part is required")
    for q, r in parts:
        require_valid(q, r)
    maps = _disjoint_label_maps([r for _, r in parts])
    return [r.relabel(m) for (_, r), m in zip(parts, maps)]


def _assemble(label_sets: list[set[str]], ground_order: list[str]) -> Representation:
    return Representation.from_sets(label_sets, ground_order)


def compose_disjoint_reps(parts: Sequence[tuple[Poset, Representation]]) -> Representation:
    """Representation of the disjoint sum of the parts (element order as in ``disjoint_sum``).

    Every part whose representation uses the empty set receives a fresh
    ``@k`` label added to all of its sets.
    """
    reps = _check_parts(parts)
    used = {a for r in reps for a in r.ground}
    needy = [i for i, r in enumerate(reps) if 0 in r.sets]
    fresh = dict(zip(needy, fresh_labels(used, len(needy))))
    sets: list[set[str]] = []
    order: list[str] = []
    for i, r in enumerate(reps):
        order.extend(r.ground)
        extra = {fresh[i]} if i in fresh else set()
        if extra:
            order.extend(extra)
        sets.extend(set(s) | extra for s in r.label_sets())
    return _assemble(sets, order)


def split_component_reps(p: Poset, r: Representation) -> list[Representation]:
    """Restrict ``r`` to each component of ``p``; the sets are kept verbatim."""
    require_valid(p, r)
    dec = component_decomposition(p)
    if len(dec) == 1:
        return [r]
    return [Representation.from_masks(r.ground, [r.sets[v] for v in emb]) for emb in dec.embedding]


def compose_vertical_reps(parts: Sequence[tuple[Poset, Representation]]) -> Representation:
    """Representation of the vertical sum: part ``i`` sets gain the grounds of all earlier parts."""
    reps = _check_parts(parts)
    sets: list[set[str]] = []
    order: list[str] = []
    earlier: set[str] = set()
    for r in reps:
        sets.extend(set(s) | earlier for s in r.label_sets())
        order.extend(r.ground)
        earlier |= set(r.ground)
    out = _assemble(sets, order)
    check = validate_representation(vertical_sum([q for q, _ in parts]), out)
    if not check:
        raise InvalidRepresentation(
            "vertical composition is not a representation (two stacked parts have empty grounds)"
        )
    return out


def split_block_reps(p: Poset, r: Representation) -> list[Representation]:
    """Per block ``i``, the sets ``S_x - W_i`` where ``W_i`` is the union of the previous block's sets."""
    require_valid(p, r)
    dec = block_decomposition(p)
    if len(dec) == 1:
        return [r]
    out = []
    prev = 0
    for emb in dec.embedding:
        out.append(Representation.from_masks(r.ground, [r.sets[v] & ~prev for v in emb]))
        prev = 0
        for v in emb:
            prev |= r.sets[v]
    return out


# ---------------------------------------------------------------------------
# constructive reductions


@dataclass(frozen=True)
class KeyStepQuotient:
    """The poset of distinct difference sets ``S_x - S_y`` over ``x`` outside ``D[y]``."""

    poset: Poset
    diffs: tuple[int, ...]  # ground mask of each quotient element
    element_of: dict[int, int]  # poset element id -> quotient element id
    epsilon: int


def key_step_quotient(p: Poset, r: Representation, y: int) -> KeyStepQuotient:
    p._check(y)
    down = p.down_mask(y)
    if down == p.full:
        raise ValueError("y is the unique maximal element; nothing lies outside its down set")
    sy = r.sets[y]
    diffs: list[int] = []
    element_of = {}
    for x in range(p.n):
        if down >> x & 1:
            continue
        alpha = r.sets[x] & ~sy
        if alpha not in diffs:
            diffs.append(alpha)
        element_of[x] = diffs.index(alpha)
    below = [sum(1 << j for j, b in enumerate(diffs) if b != a and b & ~a == 0) for a in diffs]
    q = Poset.from_below(below)
    eps = 1 if q.has_unique_minimal() else 0
    return KeyStepQuotient(q, tuple(diffs), element_of, eps)


def key_step_reduce(p: Poset, r: Representation, y: int) -> Representation:
    """Shrink the part of ``r`` outside ``D[y]`` while keeping every set size from growing.

    Sets inside ``D[y]`` are kept.  For ``x`` outside, ``S'_x = R'_a | (S_x & S_y) | A'``
    where ``a = S_x - S_y``, ``R'`` is an irreducible reduction of the
    difference family shifted by its unique minimum ``A`` (if any), and ``A'``
    holds the smallest label of ``A`` when that minimum exists.
    """
    from .solvers import reduce_to_irreducible

    require_valid(p, r)
    quot = key_step_quotient(p, r, y)
    q = quot.poset
    sy = r.sets[y]
    a_mask = 0
    if quot.epsilon:
        a_mask = quot.diffs[q.minimal[0]]
    shifted = Representation.from_masks(r.ground, [d & ~a_mask for d in quot.diffs])
    reduced = reduce_to_irreducible(q, shifted)
    fresh = fresh_labels(r.ground, reduced.ground_size)
    reduced = reduced.relabel(dict(zip(reduced.ground, fresh)))

    a_prime = 0
    if quot.epsilon:
        a_prime = a_mask & -a_mask  # smallest label of A
    ground = list(r.ground) + list(reduced.ground)
    offset = len(r.ground)
    down = p.down_mask(y)
    masks = []
    for x in range(p.n):
        if down >> x & 1:
            masks.append(r.sets[x])
        else:
            alpha = quot.element_of[x]
            masks.append((reduced.sets[alpha] << offset) | (r.sets[x] & sy) | a_prime)
    return Representation.from_masks(ground, masks)


class Violation(NamedTuple):
    """A failure of one of the three properties, as reported by the property checkers."""

    kind: str  # "no-block-is-chain", "two-down" or "parallel-pair"
    witness: Any


def strict_reduction_from_violation(p: Poset, violation: Violation | tuple) -> Representation:
    """A strict reduction of the canonical representation built from a property violation.

    * ``("two-down", y)``: replace ``S_y`` by the open down set of ``y``.
    * ``("parallel-pair", (x, y))``: for every ``u >= y`` use ``{x} | D[u] - {y}``.
    * ``("no-block-is-chain", x)``: represent the chain block holding ``x`` by
      its open down sets (sizes ``0..|C|-1``) and every other block canonically.
    """
    from . import characterization as ch

    kind, witness = violation
    if kind == "two-down":
        y = witness
        p._check(y)
        if popcount(p.cover_below[y]) < 2 or ch.two_down_partner(p, y) is not None:
            raise ValueError(f"{p.labels[y]} does not violate the Two Down property")
        masks = [p.down_mask(u) for u in range(p.n)]
        masks[y] = p.below[y]
        out = Representation.from_masks(p.labels, masks)
    elif kind == "parallel-pair":
        x, y = witness
        p._check(x)
        p._check(y)
        if not p.incomparable(x, y) or ch.parallel_pair_ok(p, x, y):
            raise ValueError("the pair does not violate the Parallel Pair property")
        masks = []
        for u in range(p.n):
            d = p.down_mask(u)
            if p.le(y, u):
                d = (d & ~(1 << y)) | (1 << x)
            masks.append(d)
        out = Representation.from_masks(p.labels, masks)
    elif kind in ("no-block-is-chain", "chain-block"):
        x = witness
        p._check(x)
        if any(p.incomparable(x, z) for z in range(p.n)):
            raise ValueError(f"{p.labels[x]} is incomparable to some element; its block is no chain")
        dec = block_decomposition(p)
        parts = []
        for q, emb in zip(dec.parts, dec.embedding):
            if x in emb:
                parts.append((q, Representation.from_masks(q.labels, list(q.below))))
            else:
                parts.append((q, canonical_representation(q)))
        out = embed_parts(dec.embedding, compose_vertical_reps(parts), p.n)
    else:
        raise ValueError(f"unknown violation kind {kind!r}")
    require_valid(p, out)
    return out


def embed_parts(dec_embedding: Sequence[Sequence[int]], composed: Representation, n: int) -> Representation:
    """Reorder a representation composed in part order back into the parent's element order."""
    order = [v for emb in dec_embedding for v in emb]
    masks = [0] * n
    for pos, v in enumerate(order):
        masks[v] = composed.sets[pos]
    return Representation(composed.ground, tuple(masks))


__all__ = [
    "Check",
    "ComparisonVerdict",
    "InvalidRepresentation",
    "KeyStepQuotient",
    "Representation",
    "Violation",
    "canonical_representation",
    "compare_representations",
    "compose_disjoint_reps",
    "compose_vertical_reps",
    "embed_parts",
    "fresh_labels",
    "is_reduction",
    "key_step_quotient",
    "key_step_reduce",
    "representation_isomorphism",
    "representations_isomorphic",
    "require_valid",
    "split_block_reps",
    "split_component_reps",
    "strict_reduction_from_violation",
    "validate_representation",
]
