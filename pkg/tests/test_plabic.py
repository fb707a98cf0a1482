import itertools

import pytest

from dimerpoly import fixtures
from dimerpoly.errors import InputError, NotReducedAsserted
from dimerpoly.plabic import (achievable_boundaries, boundary_of, build_H, enumerate_apm,
                              is_almost_perfect, ladder_plabic, plabic_from_json,
                              twist_formula, verify_plucker_cluster_monomial)


def test_fixture_types_and_face_counts():
    for name in ("gr24", "gr25", "gr26"):
        G = fixtures.load_fixture_plabic(name)
        assert G.k == 2
        # reduced graphs of the top cell have k(n-k) + 1 faces
        assert len(G.all_faces) == G.k * (G.n - G.k) + 1
        assert len(G.mutable_faces) == G.n - 3
        # every k-subset is achievable
        assert len(achievable_boundaries(G)) == len(list(itertools.combinations(range(G.n), G.k)))


def test_ladder_matches_fixture():
    G = fixtures.load_fixture_plabic("gr25")
    H = ladder_plabic(5)
    assert H.to_json() == G.to_json()
    assert plabic_from_json(G.to_json()).to_json() == G.to_json()


def test_gr24_values():
    G = fixtures.load_fixture_plabic("gr24")
    lat = enumerate_apm(G, (1, 3))
    assert len(lat.matchings) == 2
    for M in lat.matchings:
        assert is_almost_perfect(G, M) and boundary_of(G, M) == {1, 3}
    rep = verify_plucker_cluster_monomial(G, (1, 3))
    tw = rep.result
    assert tw.laurent.to_text() == "x1^-1*x2*x3^-1*x4*x5^-1 + x1^-1"
    assert [(z.to_text(), k) for z, k in tw.decomposition] == [("x1^-1*x2*x4 + x1^-1*x3*x5", 1)]
    assert tw.frozenMonomial.to_text() == "x3^-1*x5^-1"
    assert twist_formula(G, (1, 2)).laurent.to_text() == "x4^-1"
    tw = verify_plucker_cluster_monomial(G, (2, 4)).result
    assert [(z.to_text(), k) for z, k in tw.decomposition] == [("x1", 1)]


def test_gr25_values():
    G = fixtures.load_fixture_plabic("gr25")
    assert twist_formula(G, (1, 3)).laurent.to_text() == \
        "x2^-1 + x1^-1*x3*x4^-1*x5*x6^-1 + x1^-1*x2^-1*x5*x6^-1*x7"
    assert twist_formula(G, (2, 5)).laurent.to_text() == "x1*x3^-1*x5^-1"


def test_every_subset_gr24_gr25():
    for name in ("gr24", "gr25", "gr26"):
        G = fixtures.load_fixture_plabic(name)
        for J in itertools.combinations(range(1, G.n + 1), G.k):
            rep = verify_plucker_cluster_monomial(G, J)
            assert rep.ok and not rep.details["vanishing"], (name, J)
            assert not rep.details["problems"]


def test_vanishing_exactly_without_matchings():
    G = fixtures.load_fixture_plabic("gr24_loop")
    for J in itertools.combinations(range(1, 6), 2):
        rep = verify_plucker_cluster_monomial(G, J)
        vanishes = 4 in J
        assert rep.details["vanishing"] == vanishes
        assert (not enumerate_apm(G, J).matchings) == vanishes
        assert rep.result.laurent.is_zero() == vanishes


def test_two_component_decomposition():
    G = fixtures.load_fixture_plabic("two_squares")
    J = (1, 3, 5, 7)
    P = build_H(G, J)
    assert [sorted(H.inner_faces) for H in P.nontrivial()] == [[1], [2]]
    rep = verify_plucker_cluster_monomial(G, J)
    assert len(rep.details["clusterVariables"]) == 2
    assert rep.details["components"] == [[1], [2]]


def test_reducedness_must_be_asserted():
    G = ladder_plabic(4)
    G.reduced_asserted = False
    with pytest.raises(NotReducedAsserted):
        verify_plucker_cluster_monomial(G, (1, 3))


def test_bad_boundary_sets():
    G = fixtures.load_fixture_plabic("gr24")
    with pytest.raises(InputError):
        enumerate_apm(G, (1, 9))
