"""Independent reference implementations used to cross-check the library.

Nothing here imports poset_cube.  Posets are given as strict-order relation
sets ``{(x, y), ...}`` meaning ``x < y`` on elements ``0..n-1``.
"""

from __future__ import annotations

from itertools import combinations, permutations, product


def closure(n, rel):
    lt = [[False] * n for _ in range(n)]
    for x, y in rel:
        lt[x][y] = True
    for k in range(n):
        for i in range(n):
            if lt[i][k]:
                for j in range(n):
                    if lt[k][j]:
                        lt[i][j] = True
    return lt


def is_strict_order(n, lt):
    for i in range(n):
        if lt[i][i]:
            return False
        for j in range(n):
            if lt[i][j] and lt[j][i]:
                return False
            for k in range(n):
                if lt[i][j] and lt[j][k] and not lt[i][k]:
                    return False
    return True


def labeled_orders_by_subsets(n):
    """Every strict order on ``n`` labeled elements, by testing every relation subset."""
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    out = []
    for mask in range(1 << len(pairs)):
        lt = [[False] * n for _ in range(n)]
        for k, (i, j) in enumerate(pairs):
            if mask >> k & 1:
                lt[i][j] = True
        if is_strict_order(n, lt):
            out.append(frozenset((i, j) for i, j in pairs if lt[i][j]))
    return out


def labeled_orders(n):
    """Every strict order on ``n`` labeled elements, built by inserting element ``n-1``."""
    if n == 1:
        return [frozenset()]
    out = []
    for rel in labeled_orders(n - 1):
        m = n - 1
        lt = closure(m, rel)
        elems = range(m)
        for dbits in range(1 << m):
            down = {x for x in elems if dbits >> x & 1}
            if any(lt[y][x] and y not in down for x in down for y in elems):
                continue
            for ubits in range(1 << m):
                up = {x for x in elems if ubits >> x & 1}
                if up & down:
                    continue
                if any(lt[x][y] and y not in up for x in up for y in elems):
                    continue
                if any(not lt[d][u] for d in down for u in up):
                    continue
                out.append(frozenset(rel | {(d, m) for d in down} | {(m, u) for u in up}))
    return out


def relation_key(n, rel, perm):
    return tuple(sorted((perm[x], perm[y]) for x, y in rel))


def iso_key(n, rel):
    return min(relation_key(n, rel, perm) for perm in permutations(range(n)))


def isomorphism_classes(n, orders=None):
    orders = labeled_orders(n) if orders is None else orders
    seen = {}
    for rel in orders:
        seen.setdefault(iso_key(n, rel), rel)
    return list(seen.values())


def isomorphic(n, rel_a, rel_b):
    target = set(rel_b)
    return any({(p[x], p[y]) for x, y in rel_a} == target for p in permutations(range(n)))


def _subsets(g):
    return [frozenset(c) for k in range(g + 1) for c in combinations(range(g), k)]


def representation_profiles(n, rel, max_labels):
    """All ``(ground size, set sizes)`` of valid representations over labels ``0..max_labels-1``.

    Sets are assigned element by element; a partial assignment is dropped as
    soon as a decided pair violates ``x <= y iff S_x <= S_y``.
    """
    lt = closure(n, rel)
    le = [[i == j or lt[i][j] for j in range(n)] for i in range(n)]
    subsets = _subsets(max_labels)
    profiles = set()
    chosen = []

    def rec(i):
        if i == n:
            ground = frozenset().union(*chosen)
            profiles.add((len(ground), tuple(len(s) for s in chosen)))
            return
        for s in subsets:
            ok = True
            for j, t in enumerate(chosen):
                if (t <= s) != le[j][i] or (s <= t) != le[i][j]:
                    ok = False
                    break
            if ok:
                chosen.append(s)
                rec(i + 1)
                chosen.pop()

    rec(0)
    return profiles


def pareto_minimal(profiles):
    def leq(a, b):
        return a[0] <= b[0] and all(x <= y for x, y in zip(a[1], b[1]))

    return {p for p in profiles if not any(q != p and leq(q, p) for q in profiles)}


def parameters(n, rel, max_labels=None):
    """``(ch, dim2, cw, iir)`` by exhaustive set assignment; ``max_labels`` defaults to ``n``."""
    max_labels = n if max_labels is None else max_labels
    profs = representation_profiles(n, rel, max_labels)
    ch = min(max(s, default=0) for _, s in profs)
    dim2 = min(g for g, _ in profs)
    cw = min(g for g, s in profs if max(s, default=0) <= ch)
    iir = max(g for g, _ in pareto_minimal(profs))
    return ch, dim2, cw, iir


def is_valid(n, rel, sets):
    lt = closure(n, rel)
    for i, j in product(range(n), repeat=2):
        if (i == j or lt[i][j]) != (set(sets[i]) <= set(sets[j])):
            return False
    return True


def rel_from_below(below):
    return frozenset((x, y) for y, m in enumerate(below) for x in range(len(below)) if m >> x & 1)
