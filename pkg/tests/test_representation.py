import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import is_valid, rel_from_below
from poset_cube.generators import (
    antichain,
    chain,
    enumerate_posets,
    gen_basic,
    gen_equivalence_example,
    random_representation,
    single,
)
from poset_cube.poset import disjoint_sum, vertical_sum
from poset_cube.representation import (
    InvalidRepresentation,
    Representation,
    canonical_representation,
    compare_representations,
    compose_disjoint_reps,
    compose_vertical_reps,
    key_step_quotient,
    key_step_reduce,
    representations_isomorphic,
    split_block_reps,
    split_component_reps,
    strict_reduction_from_violation,
    validate_representation,
)

LAMBDA = gen_basic("lambda")
V = gen_basic("v")


def sets_of(r):
    return [set(s) for s in r.label_sets()]


# construction and JSON ---------------------------------------------------------


def test_ground_must_be_covered():
    with pytest.raises(InvalidRepresentation):
        Representation(("1", "2"), (1, 1))


def test_json_round_trip():
    r = canonical_representation(LAMBDA)
    assert Representation.from_json(LAMBDA, r.to_json(LAMBDA)) == r


@pytest.mark.parametrize(
    "data",
    [
        {"ground": ["1", "2"], "sets": {"a": ["1"], "b": ["1"], "top": ["1"]}},  # orphan label 2
        {"ground": ["1"], "sets": {"a": ["1"], "b": ["9"], "top": ["1"]}},  # unknown label
        {"ground": ["1"], "sets": {"a": ["1"]}},  # missing elements
        {"sets": {}},
    ],
)
def test_json_rejects_bad_input(data):
    with pytest.raises(InvalidRepresentation):
        Representation.from_json(LAMBDA, data)


# validation -------------------------------------------------------------------


def test_canonical_is_valid_for_small_posets():
    for n in range(1, 7):
        for p in enumerate_posets(n):
            assert validate_representation(p, canonical_representation(p)).valid


def test_v_with_empty_bottom_is_valid():
    r = Representation.from_sets([[], ["1"], ["2"]])
    assert validate_representation(V, r).valid


def test_invalid_reports_pair():
    r = Representation.from_sets([["1"], ["1"], ["1", "2"]])
    check = validate_representation(LAMBDA, r)
    assert not check.valid and check.pair == (0, 1)


@settings(max_examples=80)
@given(st.integers(1, 5), st.integers(0, 10_000))
def test_validation_matches_oracle(n, seed):
    rng = random.Random(seed)
    p = rng.choice(list(enumerate_posets(n)))
    sets = [set(rng.sample("abc", rng.randint(0, 3))) for _ in range(n)]
    if not set().union(*sets):
        sets[0] = {"a"}
    r = Representation.from_sets(sets)
    assert validate_representation(p, r).valid == is_valid(n, rel_from_below(p.below), sets)


# comparison and isomorphism ----------------------------------------------------


def test_reduction_of_itself():
    r = canonical_representation(LAMBDA)
    v = compare_representations(LAMBDA, r, r)
    assert (v.is_reduction, v.is_equivalent, v.is_strict) == (True, True, False)


def test_chain2_strict_reduction():
    r = Representation.from_sets([[], ["1"]])
    v = compare_representations(chain(2), r, canonical_representation(chain(2)))
    assert v.is_reduction and v.is_strict and not v.is_equivalent


def test_not_a_reduction_has_witness():
    c = canonical_representation(chain(2))
    small = Representation.from_sets([[], ["1"]])
    v = compare_representations(chain(2), c, small)
    assert not v.is_reduction and v.witness[0] == "ground"


def test_equivalent_not_isomorphic():
    p3, r3 = gen_equivalence_example(4, 3)
    p4, r4 = gen_equivalence_example(4, 4)
    assert p3 == p4
    v = compare_representations(p3, r3, r4)
    assert v.is_equivalent
    assert not representations_isomorphic(p3, r3, r4)


@given(st.integers(0, 10_000))
def test_relabeling_is_isomorphic(seed):
    rng = random.Random(seed)
    p = rng.choice(list(enumerate_posets(4)))
    r = random_representation(p, rng)
    names = [f"z{i}" for i in range(r.ground_size)]
    rng.shuffle(names)
    assert representations_isomorphic(p, r, r.relabel(dict(zip(r.ground, names))))


# composition --------------------------------------------------------------------


def test_compose_disjoint_adds_fresh_labels():
    c2 = Representation.from_sets([[], ["1"]])
    s = Representation.from_sets([[]], ground=[])
    out = compose_disjoint_reps([(chain(2), c2), (single(), s)])
    assert sets_of(out) == [{"@0"}, {"1", "@0"}, {"@1"}]
    assert validate_representation(disjoint_sum([chain(2), single()]), out).valid


def test_compose_disjoint_fresh_label_only_where_needed():
    rv = Representation.from_sets([[], ["1"], ["2"]])
    rs = Representation.from_sets([["9"]])
    out = compose_disjoint_reps([(V, rv), (single(), rs)])
    assert sets_of(out) == [{"@0"}, {"1", "@0"}, {"2", "@0"}, {"9"}]


def test_compose_vertical_single_below_antichain():
    out = compose_vertical_reps([(single(), Representation.from_sets([[]], ground=[])),
                                 (antichain(2), Representation.from_sets([["1"], ["2"]]))])
    assert sets_of(out) == [set(), {"1"}, {"2"}]


def test_compose_vertical_antichain_below_single():
    out = compose_vertical_reps([(antichain(2), Representation.from_sets([["1"], ["2"]])),
                                 (single(), Representation.from_sets([[]], ground=[]))])
    assert sets_of(out) == [{"1"}, {"2"}, {"1", "2"}]


def test_compose_vertical_three_empty_singles_fails():
    empty = Representation.from_sets([[]], ground=[])
    with pytest.raises(InvalidRepresentation):
        compose_vertical_reps([(single(), empty)] * 3)


def test_compose_vertical_prefixes():
    empty = Representation.from_sets([[]], ground=[])
    parts = [(single(), empty), (single(), Representation.from_sets([["b"]])),
             (single(), Representation.from_sets([["c"]]))]
    out = compose_vertical_reps(parts)
    assert sets_of(out) == [set(), {"b"}, {"b", "c"}]


def test_split_blocks_lambda():
    r = Representation.from_sets([["1"], ["2"], ["1", "2"]])
    low, top = split_block_reps(LAMBDA, r)
    assert sets_of(low) == [{"1"}, {"2"}]
    assert sets_of(top) == [set()]


def test_split_blocks_v():
    r = Representation.from_sets([[], ["1"], ["2"]])
    bottom, tops = split_block_reps(V, r)
    assert sets_of(bottom) == [set()]
    assert sets_of(tops) == [{"1"}, {"2"}]


def test_vertical_round_trip_verbatim():
    a = Representation.from_sets([["1"], ["2"]])
    b = Representation.from_sets([["x"], ["x", "y"]])
    whole = vertical_sum([antichain(2), chain(2)])
    pieces = split_block_reps(whole, compose_vertical_reps([(antichain(2), a), (chain(2), b)]))
    assert pieces == [a, b]


def test_component_round_trip():
    a = canonical_representation(chain(2))
    b = canonical_representation(antichain(2))
    whole = disjoint_sum([chain(2), antichain(2)])
    composed = compose_disjoint_reps([(chain(2), a), (antichain(2), b)])
    pieces = split_component_reps(whole, composed)
    assert [len(pc.ground) for pc in pieces] == [2, 1, 1]


# key step ---------------------------------------------------------------------


def test_key_step_antichain2():
    p = antichain(2)
    r = Representation.from_sets([["1", "2"], ["3", "4"]])
    out = key_step_reduce(p, r, 1)
    assert sets_of(out) == [{"1"}, {"3", "4"}]
    assert out.ground_size == 3 <= 0 + 1 + 2
    assert compare_representations(p, out, r).is_strict


def test_key_step_antichain3():
    p = antichain(3)
    r = Representation.from_sets([["1", "2"], ["3", "4"], ["5", "6"]])
    quot = key_step_quotient(p, r, 2)
    assert quot.poset.n == 2 and quot.poset.is_antichain() and quot.epsilon == 0
    out = key_step_reduce(p, r, 2)
    s = sets_of(out)
    assert len(s[0]) == len(s[1]) == 1 and s[0] != s[1] and s[2] == {"5", "6"}
    assert out.ground_size <= 4
    assert validate_representation(p, out).valid


def test_key_step_rejects_unique_maximal():
    with pytest.raises(ValueError):
        key_step_reduce(LAMBDA, canonical_representation(LAMBDA), 2)


@settings(max_examples=60)
@given(st.integers(1, 5), st.integers(0, 10_000))
def test_key_step_dominates(n, seed):
    rng = random.Random(seed)
    p = rng.choice(list(enumerate_posets(n)))
    r = random_representation(p, rng)
    for y in range(p.n):
        if p.down_mask(y) == p.full:
            continue
        out = key_step_reduce(p, r, y)
        assert validate_representation(p, out).valid
        assert all(a <= b for a, b in zip(out.sizes(), r.sizes()))


# constructive strict reductions --------------------------------------------------


def test_violation_two_down_lambda():
    out = strict_reduction_from_violation(LAMBDA, ("two-down", 2))
    assert sets_of(out) == [{"a"}, {"b"}, {"a", "b"}]
    assert compare_representations(LAMBDA, out, canonical_representation(LAMBDA)).is_strict


def test_violation_parallel_pair():
    p = disjoint_sum([chain(2), chain(2)])
    bottom1, top1, bottom2, top2 = range(4)
    out = strict_reduction_from_violation(p, ("parallel-pair", (top1, top2)))
    assert out.label_set(top2) == {p.labels[top1], p.labels[bottom2]}
    assert out.ground_size == 3


def test_violation_chain_block():
    out = strict_reduction_from_violation(chain(3), ("no-block-is-chain", 0))
    assert out.sizes() == (0, 1, 2) and out.ground_size == 2
    assert compare_representations(chain(3), out, canonical_representation(chain(3))).is_strict


def test_violation_must_be_real():
    with pytest.raises(ValueError):
        strict_reduction_from_violation(antichain(3), ("two-down", 0))
    with pytest.raises(ValueError):
        strict_reduction_from_violation(antichain(3), ("parallel-pair", (0, 1)))
