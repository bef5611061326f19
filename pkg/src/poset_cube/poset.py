"""Finite posets on dense element ids, with sums, decompositions and isomorphism.

A poset on ``n`` elements stores, for every element ``x``, the bitmask of the
elements strictly below ``x``.  All values are immutable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence


class PosetError(ValueError):
    """Raised for malformed posets or invalid element ids."""


class PosetParseError(PosetError):
    """Raised when a poset file cannot be parsed."""


class _Empty:
    """Marker for the empty subposet (posets themselves are never empty)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "EMPTY"

    def __len__(self) -> int:
        return 0

    def __bool__(self) -> bool:
        return False


EMPTY = _Empty()


def bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def popcount(mask: int) -> int:
    return bin(mask).count("1")


@dataclass(frozen=True)
class Poset:
    """A finite strict order.  ``below[x]`` is the bitmask of ``{y : y < x}``."""

    labels: tuple[str, ...]
    below: tuple[int, ...] = field(repr=False)

    def __post_init__(self):
        n = len(self.labels)
        if n == 0:
            raise PosetError("a poset needs at least one element")
        if len(self.below) != n:
            raise PosetError("one down-set mask per element required")
        if len(set(self.labels)) != n:
            raise PosetError("duplicate element label")
        full = (1 << n) - 1
        for x, d in enumerate(self.below):
            if d & ~full:
                raise PosetError(f"element {x} refers to an unknown id")
            if d >> x & 1:
                raise PosetError(f"element {self.labels[x]} is below itself")
            for y in bits(d):
                if self.below[y] & ~d:
                    raise PosetError("relation is not transitively closed")

    # construction ---------------------------------------------------------

    @classmethod
    def from_relations(cls, labels: Sequence[str], pairs: Iterable[tuple[int, int]]) -> "Poset":
        """Build the transitive closure of the pairs ``(x, y)`` meaning ``x < y``."""
        n = len(labels)
        below = [0] * n
        for x, y in pairs:
            if not (0 <= x < n and 0 <= y < n):
                raise PosetError(f"id out of range in relation {(x, y)}")
            below[y] |= 1 << x
        changed = True
        while changed:
            changed = False
            for y in range(n):
                acc = below[y]
                for x in bits(below[y]):
                    acc |= below[x]
                if acc != below[y]:
                    below[y] = acc
                    changed = True
        for x in range(n):
            if below[x] >> x & 1:
                raise PosetError(f"relation cycle through {labels[x]}")
        return cls(tuple(labels), tuple(below))

    @classmethod
    def from_below(cls, below: Sequence[int], labels: Sequence[str] | None = None) -> "Poset":
        if labels is None:
            labels = [str(i) for i in range(len(below))]
        return cls(tuple(labels), tuple(below))

    # basic queries --------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    @cached_property
    def full(self) -> int:
        return (1 << self.n) - 1

    @cached_property
    def above(self) -> tuple[int, ...]:
        up = [0] * self.n
        for y, d in enumerate(self.below):
            for x in bits(d):
                up[x] |= 1 << y
        return tuple(up)

    @cached_property
    def index(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.labels)}

    def _check(self, x: int) -> None:
        if not 0 <= x < self.n:
            raise PosetError(f"element id {x} out of range for a poset of size {self.n}")

    def lt(self, x: int, y: int) -> bool:
        return bool(self.below[y] >> x & 1)

    def le(self, x: int, y: int) -> bool:
        return x == y or bool(self.below[y] >> x & 1)

    def incomparable(self, x: int, y: int) -> bool:
        return x != y and not (self.below[y] >> x & 1) and not (self.below[x] >> y & 1)

    def down_mask(self, x: int, closed: bool = True) -> int:
        return self.below[x] | (1 << x) if closed else self.below[x]

    def up_mask(self, x: int, closed: bool = True) -> int:
        return self.above[x] | (1 << x) if closed else self.above[x]

    @cached_property
    def minimal(self) -> list[int]:
        return [x for x in range(self.n) if not self.below[x]]

    @cached_property
    def maximal(self) -> list[int]:
        return [x for x in range(self.n) if not self.above[x]]

    def has_unique_minimal(self) -> bool:
        return len(self.minimal) == 1

    def has_unique_maximal(self) -> bool:
        return len(self.maximal) == 1

    def is_chain(self) -> bool:
        return all(popcount(self.below[x] | self.above[x]) == self.n - 1 for x in range(self.n))

    def is_antichain(self) -> bool:
        return not any(self.below)

    @cached_property
    def cover_below(self) -> tuple[int, ...]:
        """``cover_below[y]`` is the mask of elements covered by ``y``."""
        out = []
        for y in range(self.n):
            d = self.below[y]
            inner = 0
            for z in bits(d):
                inner |= self.below[z]
            out.append(d & ~inner)
        return tuple(out)

    def linear_extension(self) -> list[int]:
        """Elements sorted by closed down-set size, ties by id."""
        return sorted(range(self.n), key=lambda x: (popcount(self.below[x]), x))

    def height_of(self, x: int) -> int:
        """Length of the longest chain ending at ``x`` (minimal elements have height 0)."""
        h = [0] * self.n
        for v in self.linear_extension():
            h[v] = max((h[u] + 1 for u in bits(self.below[v])), default=0)
        return h[x]

    def __str__(self) -> str:
        return format_poset(self)


# ---------------------------------------------------------------------------
# file format


def parse_poset(text: str) -> Poset:
    """Parse the ``poset v1`` text format."""
    lines = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        lines.append(line)
    if not lines or lines[0] != "poset v1":
        raise PosetParseError("first line must be 'poset v1'")
    names: list[str] | None = None
    pairs: list[tuple[str, str]] = []
    for line in lines[1:]:
        tokens = line.split()
        if tokens[0] == "elements":
            if names is not None:
                raise PosetParseError("'elements' declared more than once")
            names = tokens[1:]
            if not names:
                raise PosetParseError("a poset needs at least one element")
            seen = set()
            for name in names:
                if name in seen:
                    raise PosetParseError(f"duplicate element {name!r}")
                seen.add(name)
        elif tokens[0] == "rel":
            if len(tokens) != 4 or tokens[2] != "<":
                raise PosetParseError(f"malformed relation line: {line!r}")
            pairs.append((tokens[1], tokens[3]))
        else:
            raise PosetParseError(f"unrecognised line: {line!r}")
    if names is None:
        raise PosetParseError("missing 'elements' line")
    index = {name: i for i, name in enumerate(names)}
    id_pairs = []
    for a, b in pairs:
        for name in (a, b):
            if name not in index:
                raise PosetParseError(f"unknown element {name!r}")
        id_pairs.append((index[a], index[b]))
    try:
        return Poset.from_relations(names, id_pairs)
    except PosetError as exc:
        raise PosetParseError(str(exc)) from exc


def format_poset(p: Poset) -> str:
    """Render ``p`` in the ``poset v1`` format, listing cover relations only."""
    out = ["poset v1", "elements " + " ".join(p.labels)]
    for y in range(p.n):
        for x in bits(p.cover_below[y]):
            out.append(f"rel {p.labels[x]} < {p.labels[y]}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# order queries


def order_query(p: Poset, x: int, y: int) -> str:
    """Classify the pair as ``'lt'``, ``'gt'``, ``'eq'`` or ``'incomparable'``."""
    p._check(x)
    p._check(y)
    if x == y:
        return "eq"
    if p.lt(x, y):
        return "lt"
    if p.lt(y, x):
        return "gt"
    return "incomparable"


def down_up_set(p: Poset, x: int, direction: str = "down", closed: bool = True) -> set[int]:
    p._check(x)
    if direction == "down":
        return set(bits(p.down_mask(x, closed)))
    if direction == "up":
        return set(bits(p.up_mask(x, closed)))
    raise ValueError(f"direction must be 'down' or 'up', not {direction!r}")


def covers(p: Poset) -> set[tuple[int, int]]:
    """All pairs ``(x, y)`` such that ``y`` covers ``x``."""
    return {(x, y) for y in range(p.n) for x in bits(p.cover_below[y])}


def induced_subposet(p: Poset, keep: Iterable[int]) -> Poset | _Empty:
    keep = sorted(set(keep))
    for x in keep:
        p._check(x)
    if not keep:
        return EMPTY
    pos = {x: i for i, x in enumerate(keep)}
    below = []
    for x in keep:
        m = 0
        for y in bits(p.below[x]):
            if y in pos:
                m |= 1 << pos[y]
        below.append(m)
    return Poset(tuple(p.labels[x] for x in keep), tuple(below))


def subposet_mask(p: Poset, mask: int) -> Poset | _Empty:
    return induced_subposet(p, bits(mask))


# ---------------------------------------------------------------------------
# sums


def _joined_labels(parts: Sequence[Poset]) -> list[str]:
    labels = [name for q in parts for name in q.labels]
    if len(set(labels)) == len(labels):
        return labels
    return [f"{i}:{name}" for i, q in enumerate(parts) for name in q.labels]


def _check_parts(parts: Sequence[Poset]) -> None:
    if not parts:
        raise PosetError("at least one part is required")
    for q in parts:
        if not isinstance(q, Poset):
            raise PosetError("parts must be non-empty posets")


def disjoint_sum(parts: Sequence[Poset]) -> Poset:
    _check_parts(parts)
    below: list[int] = []
    offset = 0
    for q in parts:
        below.extend(d << offset for d in q.below)
        offset += q.n
    return Poset(tuple(_joined_labels(parts)), tuple(below))


def vertical_sum(parts: Sequence[Poset]) -> Poset:
    """Stack the parts so every element of part ``i`` lies below every element of part ``j > i``."""
    _check_parts(parts)
    below: list[int] = []
    offset = 0
    for q in parts:
        prefix = (1 << offset) - 1
        below.extend((d << offset) | prefix for d in q.below)
        offset += q.n
    return Poset(tuple(_joined_labels(parts)), tuple(below))


# ---------------------------------------------------------------------------
# decompositions


@dataclass(frozen=True)
class Decomposition:
    kind: str  # "component" or "block"
    parts: tuple[Poset, ...]
    embedding: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.parts)

    def part_of(self) -> dict[int, int]:
        return {v: i for i, emb in enumerate(self.embedding) for v in emb}


def _decomposition(p: Poset, kind: str, groups: list[list[int]]) -> Decomposition:
    parts = tuple(induced_subposet(p, g) for g in groups)
    return Decomposition(kind, parts, tuple(tuple(sorted(g)) for g in groups))


def _require_poset(p) -> None:
    if not isinstance(p, Poset):
        raise PosetError("decompositions need a non-empty poset")


def component_decomposition(p: Poset) -> Decomposition:
    """Connected components of the comparability graph, ordered by least element id."""
    _require_poset(p)
    seen = 0
    groups = []
    for start in range(p.n):
        if seen >> start & 1:
            continue
        comp = 1 << start
        frontier = comp
        while frontier:
            nxt = 0
            for v in bits(frontier):
                nxt |= p.below[v] | p.above[v]
            frontier = nxt & ~comp
            comp |= nxt
        seen |= comp
        groups.append(bits(comp))
    return _decomposition(p, "component", groups)


def vertical_cuts(p: Poset) -> list[int]:
    """Prefix lengths ``k`` (0 < k < n) at which ``p`` splits as a vertical sum.

    The prefix is taken in the linear extension by down-set size; a prefix of
    size ``k`` is a cut iff exactly ``k * (n - k)`` comparable pairs cross it.
    """
    _require_poset(p)
    order = p.linear_extension()
    n = p.n
    cuts = []
    prefix = 0
    for k in range(1, n):
        prefix |= 1 << order[k - 1]
        crossing = sum(popcount(p.below[order[j]] & prefix) for j in range(k, n))
        if crossing == k * (n - k):
            cuts.append(k)
    return cuts


def block_decomposition(p: Poset) -> Decomposition:
    """Shortest list of blocks (chains or vertical primes) whose vertical sum is ``p``."""
    _require_poset(p)
    order = p.linear_extension()
    bounds = [0] + vertical_cuts(p) + [p.n]
    finest = [order[a:b] for a, b in zip(bounds, bounds[1:])]
    groups: list[list[int]] = []
    run: list[int] = []
    for part in finest:
        if len(part) == 1:
            run.extend(part)
            continue
        if run:
            groups.append(run)
            run = []
        groups.append(part)
    if run:
        groups.append(run)
    return _decomposition(p, "block", groups)


def is_block(p: Poset) -> bool:
    return len(block_decomposition(p)) == 1


def is_component(p: Poset) -> bool:
    return len(component_decomposition(p)) == 1


# ---------------------------------------------------------------------------
# isomorphism


def _refined_colors(p: Poset) -> list[int]:
    colors = [(popcount(p.below[x]), popcount(p.above[x])) for x in range(p.n)]
    ranks = _rank(colors)
    while True:
        sig = [
            (ranks[x],
             tuple(sorted(ranks[y] for y in bits(p.below[x]))),
             tuple(sorted(ranks[y] for y in bits(p.above[x]))))
            for x in range(p.n)
        ]
        new = _rank(sig)
        if len(set(new)) == len(set(ranks)):
            return new
        ranks = new


def _rank(keys: list) -> list[int]:
    table = {k: i for i, k in enumerate(sorted(set(keys)))}
    return [table[k] for k in keys]


def canonical_labeling(p: Poset) -> tuple[tuple[int, ...], list[int]]:
    """Return ``(form, order)``: the canonical encoding and the element placed at each position.

    ``form[k]`` is the mask of positions strictly below position ``k``.  Two
    posets are isomorphic iff their forms are equal.
    """
    colors = _refined_colors(p)
    order_slots = sorted(range(p.n), key=lambda x: colors[x])
    slot_color = [colors[x] for x in order_slots]
    n = p.n
    best: list | None = None
    best_order: list[int] = []
    placed: list[int] = []
    pos_of = [-1] * n
    rows: list[tuple[int, int]] = []

    def row_for(v: int, k: int) -> tuple[int, int]:
        dn = 0
        up = 0
        for j in range(k):
            u = placed[j]
            if p.below[v] >> u & 1:
                dn |= 1 << j
            elif p.above[v] >> u & 1:
                up |= 1 << j
        return (-dn, up)

    def search(k: int) -> None:
        nonlocal best, best_order
        if k == n:
            if best is None or rows < best:
                best = list(rows)
                best_order = list(placed)
            return
        want = slot_color[k]
        tried: set[tuple[int, int]] = set()
        cands = []
        for v in range(n):
            if pos_of[v] >= 0 or colors[v] != want:
                continue
            # swapping true twins is an automorphism fixing everything placed so far
            twin = (p.below[v], p.above[v])
            if twin in tried:
                continue
            tried.add(twin)
            cands.append((row_for(v, k), v))
        cands.sort()
        for row, v in cands:
            rows.append(row)
            if best is not None and rows > best[: k + 1]:
                rows.pop()
                continue
            placed.append(v)
            pos_of[v] = k
            search(k + 1)
            pos_of[v] = -1
            placed.pop()
            rows.pop()

    search(0)
    pos = {v: i for i, v in enumerate(best_order)}
    form = []
    for v in best_order:
        m = 0
        for u in bits(p.below[v]):
            m |= 1 << pos[u]
        form.append(m)
    return tuple(form), best_order


def canonical_form(p: Poset) -> tuple[int, ...]:
    return canonical_labeling(p)[0]


def canonical_poset(p: Poset) -> Poset:
    return Poset.from_below(canonical_form(p))


def find_isomorphism(p: Poset, q: Poset) -> dict[int, int] | None:
    """An order isomorphism ``p -> q`` as a dict of element ids, or ``None``."""
    if p.n != q.n:
        return None
    fp, op = canonical_labeling(p)
    fq, oq = canonical_labeling(q)
    if fp != fq:
        return None
    return {op[k]: oq[k] for k in range(p.n)}


def are_isomorphic(p: Poset, q: Poset) -> bool:
    return find_isomorphism(p, q) is not None
