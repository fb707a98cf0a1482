import pytest
from hypothesis import assume, given, strategies as st

from dimerpoly import fixtures
from dimerpoly.errors import MalformedPD, SegmentNotExterior
from dimerpoly.laurent import equal_up_to_unit, parse
from dimerpoly.link import (alexander_from_dimer, alexander_matrix_oracle, alexander_state_sum,
                            braid_closure, brute_force_states, clock_lattice, connect_sum,
                            connect_sum_check, exterior_segments, flock_snake_equivalence,
                            kauffman_states, link_cluster_check, parse_pd, snake_boxes, two_bridge,
                            validate_diagram)

T = ("t",)

# matrix-oracle Alexander polynomials, frozen
ALEXANDER = {
    "trefoil": "1 - t + t^2",
    "figure_eight": "-1 + 3*t - t^2",
    "hopf": "-1 + t",
    "whitehead": "-t + 3*t^2 - 3*t^3 + t^4",
}
STATES = {"trefoil": 3, "figure_eight": 5, "hopf": 2, "whitehead": 8}


def test_parse_rejects_bad_codes():
    with pytest.raises(MalformedPD):
        parse_pd("X[1,2,3,4]")
    with pytest.raises(MalformedPD):
        parse_pd("X[1,1,2,2] X[3,4,5]")
    with pytest.raises(MalformedPD):
        parse_pd("X[1,4,2,5] Y[3,6,4,1]")
    with pytest.raises(MalformedPD):
        braid_closure([1, 1], 3)


def test_split_braid_closure_has_zero_alexander():
    # the closure of sigma_1^-1 sigma_2 sigma_1 is a split two-component unlink
    L = braid_closure([-1, 2, 1, 2, -2])
    assert alexander_matrix_oracle(L).is_zero()
    assert all(alexander_from_dimer(L, i)[0].is_zero() for i in L.segment_labels)


def test_braid_closure_runs_left_to_right():
    # conjugate braids close to the same oriented link
    word = [2, 1, -2, -1, -1, -2, -2]
    polys = {alexander_matrix_oracle(braid_closure(word[k:] + word[:k], 3)) for k in range(len(word))}
    base = polys.pop()
    assert all(equal_up_to_unit(p, base)[0] for p in polys)


def test_named_links():
    for name, want in ALEXANDER.items():
        L = fixtures.load_link(name)
        assert validate_diagram(L).holds
        assert alexander_matrix_oracle(L).to_text() == want
        for i in L.segment_labels:
            spec, rep = alexander_from_dimer(L, i)
            assert rep.ok
            assert equal_up_to_unit(spec, parse(want, T))[0], (name, i)
            states, cert = kauffman_states(L, i)
            assert len(states) == STATES[name] and cert.holds


def test_trefoil_segment_one():
    L = fixtures.load_link("trefoil")
    spec, rep = alexander_from_dimer(L, 1)
    assert rep.details["D"].to_text() == "1 + y2 + y2*y6"
    assert spec.to_text() == "1 - t + t^2"
    assert alexander_state_sum(L, 1).to_text() == "-1 + t - t^2"
    assert rep.details["prefactor"].to_text() == "-1"


def test_whitehead_golden():
    gold = fixtures.golden("whitehead_i7")
    L = fixtures.load_link("whitehead")
    i = gold["segment"]
    states, covers = clock_lattice(L, i)
    assert (len(states), len(covers)) == (gold["states"], gold["covers"])
    # rank profile of the Hasse diagram
    uppers = {hi for _, hi, _ in covers}
    rank = {next(k for k in range(len(states)) if k not in uppers): 0}
    while len(rank) < len(states):
        for lo, hi, _ in covers:
            if lo in rank:
                rank[hi] = rank[lo] + 1
    profile = [sum(1 for r in rank.values() if r == k) for k in range(max(rank.values()) + 1)]
    assert profile == gold["ranks"]
    spec, rep = alexander_from_dimer(L, i)
    assert rep.details["state_sum"].to_text() == gold["stateSum"]
    assert rep.details["D"].to_text() == gold["dimerPolynomial"]
    assert spec.to_text() == gold["specialized"]


def test_states_by_brute_force_match_matchings():
    L = fixtures.load_link("figure_eight")
    for i in L.segment_labels:
        assert brute_force_states(L, i) == kauffman_states(L, i)[0]


def test_diagram_validation_witnesses():
    cert = validate_diagram(fixtures.load_link("kink"))
    assert not cert.holds
    assert cert.witness["curls"] == [0] and cert.witness["nugatory"] == [0]
    cert = validate_diagram(fixtures.load_link("split_composite"))
    assert not cert.details["connected"]
    assert cert.witness["cut"]["segments"] == [2, 13]


def test_exterior_segments():
    assert exterior_segments(fixtures.load_link("trefoil")) == [2, 4, 6]
    assert exterior_segments(fixtures.load_link("hopf")) == [1, 3]


def test_connect_sum():
    Tr = fixtures.load_link("trefoil")
    L, a, b, _ = connect_sum(Tr, 2, Tr, 2)
    assert L.to_pd() == ("X[1,4,2,5] X[3,6,4,1] X[5,13,6,3] X[7,10,13,11] X[9,12,10,7]"
                         " X[11,2,12,9]")
    cert = validate_diagram(L)
    assert not cert.details["prime_like"]
    assert cert.witness["cut"]["segments"] == sorted([a, b])
    rep = connect_sum_check(Tr, 2, fixtures.load_link("hopf"), 1)
    assert rep.ok
    assert rep.details["D"].to_text() == "1 + y1 + y8 + y1*y3 + y1*y8 + y1*y3*y8"
    with pytest.raises(SegmentNotExterior):
        connect_sum(Tr, 1, Tr, 2)


def test_two_bridge_identities():
    # C(..., a, 1) and C(..., a + 1) give the same diagram
    assert two_bridge((2, 1, 1))[0].to_pd() == two_bridge((2, 2))[0].to_pd()
    L, lower = two_bridge((3,))
    assert alexander_matrix_oracle(L).to_text() == "-1 + t - t^2"
    assert not validate_diagram(two_bridge((1,))[0]).holds
    rep = flock_snake_equivalence((2, 1, 3))
    assert rep.details["D_equal"] and rep.details["type_A"]
    assert rep.details["D"].nterms() == 11
    assert snake_boxes((2, 1, 3)) == [(0, 0), (1, 0), (2, 0), (3, 0), (3, 1)]


def test_link_cluster_check():
    for name in fixtures.LINKS:
        assert link_cluster_check(fixtures.load_link(name)).ok


braids = st.lists(st.sampled_from([1, -1, 2, -2]), min_size=2, max_size=7)


@given(braids)
def test_random_braid_closures_against_the_matrix(word):
    assume({1, 2} <= {abs(k) for k in word})
    L = braid_closure(word)
    assume(validate_diagram(L).holds)
    oracle = alexander_matrix_oracle(L)
    for i in L.segment_labels:
        spec, _ = alexander_from_dimer(L, i)
        assert equal_up_to_unit(spec, oracle)[0]


@given(braids, braids)
def test_braid_relation_leaves_alexander_unchanged(left, right):
    # both sides use sigma_1 and sigma_2, so every strand meets a crossing
    a = braid_closure(left + [1, 2, 1] + right, 3)
    b = braid_closure(left + [2, 1, 2] + right, 3)
    assert equal_up_to_unit(alexander_matrix_oracle(a), alexander_matrix_oracle(b))[0]


@given(braids)
def test_conjugation_leaves_alexander_unchanged(word):
    assume({1, 2} <= {abs(k) for k in word})
    a = braid_closure(word, 3)
    b = braid_closure(word[1:] + word[:1], 3)
    assert equal_up_to_unit(alexander_matrix_oracle(a), alexander_matrix_oracle(b))[0]
