import random

from hypothesis import given, strategies as st

from dimerpoly import fixtures
from dimerpoly.dimer import (all_ranks, build_lattice, check_distributive, dimer_face_polynomial,
                             edge_substitution, enumerate_matchings, flip, h_vector, height,
                             height_by_winding, is_perfect_matching, minimal_matching,
                             partition_function)
from dimerpoly.generators import random_property_star_graph
from dimerpoly.graph_core import bigon, cycle_graph
from dimerpoly.laurent import LaurentPoly

BIG_EX_D = ("1 + y3 + y3*y4 + y1*y3*y4 + y2*y3*y4 + y1*y2*y3*y4 + y1*y3^2*y4 + y1*y2*y3^2*y4"
            " + y1*y2*y3*y4*y5 + y1*y2*y3^2*y4*y5 + y1*y2*y3^2*y4^2*y5 + y1*y2^2*y3^2*y4^2*y5")


def test_small_graphs():
    assert dimer_face_polynomial(bigon()).to_text() == "1 + y1"
    assert dimer_face_polynomial(cycle_graph(2)).to_text() == "1 + y1"
    for name in ("bigon", "cycle4"):
        D = dimer_face_polynomial(fixtures.load_fixture_graph(name))
        assert D.to_text() == fixtures.GRAPH_META[name]["D"]


def test_big_ex_polynomial():
    G = fixtures.load_fixture_graph("big_ex")
    D = dimer_face_polynomial(G)
    assert D.to_text() == BIG_EX_D
    assert set(D.coefficients()) == {1}
    h0 = h_vector(G, minimal_matching(G))
    assert [h0[f] for f in G.inner_faces] == [0, 0, -1, 0, 0]


def test_reduction_fixture_counts():
    G = fixtures.load_fixture_graph("reduction_seq")
    ms = enumerate_matchings(G)
    assert len(ms) == 21
    assert all(is_perfect_matching(G, M) for M in ms)
    assert partition_function(G, ms).nterms() == 21


def test_three_ways_agree_on_fixtures():
    for name, G, _ in fixtures.fixture_graphs():
        D = dimer_face_polynomial(G)
        assert D == dimer_face_polynomial(G, "chain") == dimer_face_polynomial(G, "winding"), name
        assert edge_substitution(G, D) == partition_function(G), name


def test_bottom_is_unique_and_flips_go_up():
    G = fixtures.load_fixture_graph("big_ex")
    lat = build_lattice(G)
    bottom = lat.elements[lat.bottom]
    assert all(v == 0 for v in height(G, bottom).values())
    assert check_distributive(G, lat)
    for lo, hi, f in lat.covers:
        assert flip(G, lat.elements[lo], f, "up") == lat.elements[hi]
    # a cover at face f multiplies the rank by y_f
    ranks = all_ranks(G, lat)
    for lo, hi, f in lat.covers:
        assert ranks[hi] == ranks[lo] * LaurentPoly.var(ranks[lo].vars, f"y{f}")
    assert sum(ranks[1:], ranks[0]) == dimer_face_polynomial(G)


@given(st.integers(0, 10 ** 6), st.integers(1, 8))
def test_heights_by_dual_walk_and_winding(seed, n):
    G, _ = random_property_star_graph(random.Random(seed), n)
    ms = enumerate_matchings(G)
    bottom = minimal_matching(G, matchings=ms)
    for M in ms[:20]:
        assert height(G, M, bottom) == height_by_winding(G, M, bottom)
    D = dimer_face_polynomial(G, matchings=ms)
    assert D.nterms() == len(ms)
    assert all(e >= 0 for e in D.min_exponents())
    assert edge_substitution(G, D) == partition_function(G, ms)
