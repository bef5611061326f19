import random

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from poset_cube.generators import antichain, chain, enumerate_posets, gen_basic, single
from poset_cube.poset import (
    EMPTY,
    Poset,
    PosetError,
    PosetParseError,
    are_isomorphic,
    block_decomposition,
    canonical_form,
    component_decomposition,
    covers,
    disjoint_sum,
    down_up_set,
    find_isomorphism,
    format_poset,
    induced_subposet,
    is_block,
    order_query,
    parse_poset,
    vertical_sum,
)

LAMBDA = gen_basic("lambda")
V = gen_basic("v")
Z = gen_basic("z")


@st.composite
def posets(draw, max_n=7):
    n = draw(st.integers(1, max_n))
    pairs = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=2 * n))
    # orient every pair upward so the closure is acyclic
    pairs = [(min(a, b), max(a, b)) for a, b in pairs if a != b]
    perm = draw(st.permutations(range(n)))
    pairs = [(perm[a], perm[b]) for a, b in pairs]
    return Poset.from_relations([f"e{i}" for i in range(n)], pairs)


def to_digraph(p):
    g = nx.DiGraph()
    g.add_nodes_from(range(p.n))
    g.add_edges_from((x, y) for y in range(p.n) for x in range(p.n) if p.lt(x, y))
    return g


# parsing ------------------------------------------------------------------


def test_parse_two_chain():
    p = parse_poset("poset v1\nelements a b\nrel a < b\n")
    assert p.labels == ("a", "b")
    assert order_query(p, 0, 1) == "lt"


def test_parse_infers_transitivity():
    p = parse_poset("poset v1\nelements a b c\nrel a < b\nrel b < c\n")
    assert p.lt(p.index["a"], p.index["c"])


def test_parse_cycle_rejected():
    with pytest.raises(PosetParseError, match="cycle"):
        parse_poset("poset v1\nelements a b\nrel a < b\nrel b < a\n")


@pytest.mark.parametrize(
    "text",
    [
        "elements a b\n",
        "poset v1\nelements a a\n",
        "poset v1\nelements a\nrel a < b\n",
        "poset v1\nelements\n",
        "poset v1\n",
        "poset v1\nelements a\nelements b\n",
        "poset v1\nelements a b\nrel a <= b\n",
    ],
)
def test_parse_errors(text):
    with pytest.raises(PosetParseError):
        parse_poset(text)


def test_parse_comments_and_blank_lines():
    p = parse_poset("# header\nposet v1\n\n# body\nelements x y\n")
    assert p.n == 2 and p.is_antichain()


@given(posets())
def test_format_round_trip(p):
    assert parse_poset(format_poset(p)) == p


# queries ------------------------------------------------------------------


def test_order_query_cases():
    assert order_query(chain(2), 0, 1) == "lt"
    assert order_query(chain(2), 1, 0) == "gt"
    assert order_query(antichain(2), 0, 1) == "incomparable"
    assert order_query(LAMBDA, 2, 2) == "eq"
    with pytest.raises(PosetError):
        order_query(chain(2), 0, 5)


def test_down_up_sets():
    assert down_up_set(chain(3), 2, "down", closed=True) == {0, 1, 2}
    assert all(down_up_set(antichain(3), x, "down", closed=False) == set() for x in range(3))
    top = LAMBDA.index["top"]
    assert down_up_set(LAMBDA, top, "down", closed=False) == {0, 1}
    assert down_up_set(LAMBDA, 0, "up", closed=False) == {top}
    with pytest.raises(ValueError):
        down_up_set(LAMBDA, 0, "sideways")


def test_covers_lambda():
    top = LAMBDA.index["top"]
    assert covers(LAMBDA) == {(0, top), (1, top)}


@given(posets())
def test_covers_are_the_transitive_reduction(p):
    g = to_digraph(p)
    assert covers(p) == set(nx.transitive_reduction(g).edges())


def test_induced_subposet():
    q = induced_subposet(chain(3), [0, 2])
    assert q.labels == ("0", "2") and q.lt(0, 1)
    assert induced_subposet(chain(3), []) is EMPTY


# sums -----------------------------------------------------------------------


def test_disjoint_sum_z():
    z = disjoint_sum([chain(2), single(), single()])
    assert z.n == 4 and len(component_decomposition(z)) == 3
    assert are_isomorphic(z, Z)


def test_vertical_sum_lambda():
    assert are_isomorphic(vertical_sum([antichain(2), single()]), LAMBDA)
    p = vertical_sum([antichain(2), chain(2)])
    assert all(p.lt(x, y) for x in (0, 1) for y in (2, 3))


def test_sum_label_collisions_are_prefixed():
    p = disjoint_sum([chain(2), chain(2)])
    assert len(set(p.labels)) == 4


# decompositions --------------------------------------------------------------


def test_component_decomposition_z():
    dec = component_decomposition(Z)
    shapes = sorted((q.n, q.is_chain()) for q in dec.parts)
    assert shapes == [(1, True), (1, True), (2, True)]


def test_block_decomposition_lambda():
    dec = block_decomposition(LAMBDA)
    assert [q.n for q in dec.parts] == [2, 1]
    assert dec.parts[0].is_antichain()


def test_block_decomposition_merges_trailing_chain():
    p = vertical_sum([antichain(2), antichain(2), single(), single()])
    dec = block_decomposition(p)
    assert [(q.n, q.is_antichain(), q.is_chain()) for q in dec.parts] == [
        (2, True, False),
        (2, True, False),
        (2, False, True),
    ]


def _brute_cuts(p):
    """Down sets ``S`` with every element of ``S`` below every element outside it."""
    out = []
    for s in range(1, p.full):
        if all(p.lt(x, y) for x in range(p.n) if s >> x & 1 for y in range(p.n) if not s >> y & 1):
            out.append(s)
    return sorted(out, key=lambda m: bin(m).count("1"))


def _shortest_block_count(p):
    cuts = [0] + _brute_cuts(p) + [p.full]
    pieces = [cuts[i + 1] & ~cuts[i] for i in range(len(cuts) - 1)]
    count, run = 0, False
    for m in pieces:
        if bin(m).count("1") == 1:
            if not run:
                count += 1
            run = True
        else:
            count += 1
            run = False
    return count


@pytest.mark.parametrize("n", range(1, 7))
def test_block_decomposition_is_shortest(n):
    for p in enumerate_posets(n):
        dec = block_decomposition(p)
        assert len(dec) == _shortest_block_count(p)
        assert all(is_block(q) for q in dec.parts)
        assert not any(a.is_chain() and b.is_chain() for a, b in zip(dec.parts, dec.parts[1:]))
        seen = sorted(v for emb in dec.embedding for v in emb)
        assert seen == list(range(p.n))
        for i, ei in enumerate(dec.embedding):
            for ej in dec.embedding[i + 1:]:
                assert all(p.lt(x, y) for x in ei for y in ej)


@given(posets())
def test_component_decomposition_matches_weak_components(p):
    dec = component_decomposition(p)
    ours = sorted(sorted(emb) for emb in dec.embedding)
    theirs = sorted(sorted(c) for c in nx.weakly_connected_components(to_digraph(p)))
    assert ours == theirs


# isomorphism -----------------------------------------------------------------


def test_differently_built_z_are_isomorphic():
    a = disjoint_sum([chain(2), single(), single()])
    b = disjoint_sum([single(), chain(2), single()])
    assert are_isomorphic(a, b)
    f = find_isomorphism(a, b)
    assert all(a.lt(x, y) == b.lt(f[x], f[y]) for x in range(4) for y in range(4))


@settings(max_examples=150)
@given(posets(max_n=6), st.randoms(use_true_random=False))
def test_isomorphism_agrees_with_networkx(p, rnd):
    perm = list(range(p.n))
    rnd.shuffle(perm)
    inv = {v: i for i, v in enumerate(perm)}
    shuffled = Poset.from_below(
        [sum(1 << perm[x] for x in range(p.n) if p.lt(x, inv[y])) for y in range(p.n)]
    )
    assert are_isomorphic(p, shuffled)
    assert canonical_form(p) == canonical_form(shuffled)


@settings(max_examples=150)
@given(posets(max_n=6), posets(max_n=6))
def test_isomorphism_verdict_matches_networkx(p, q):
    expect = p.n == q.n and nx.is_isomorphic(to_digraph(p), to_digraph(q))
    assert are_isomorphic(p, q) == expect


def test_enumeration_has_pairwise_distinct_forms():
    rng = random.Random(0)
    ps = list(enumerate_posets(5))
    for a, b in (rng.sample(ps, 2) for _ in range(200)):
        assert not nx.is_isomorphic(to_digraph(a), to_digraph(b))
