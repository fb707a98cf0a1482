import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from dimerpoly import fixtures
from dimerpoly.errors import TooLarge
from dimerpoly.generators import random_property_star_graph
from dimerpoly.polytope import (elementary_subgraphs, face_lattice_check, feasible_nonnegative,
                                in_hull, lattice_points_are_vertices, matching_polytope_faces, psi,
                                verify_affine_iso)

TRIANGLE = [(0, 0), (2, 0), (0, 2)]


def test_hull_membership():
    assert in_hull((0, 1), TRIANGLE)
    assert in_hull((1, 1), TRIANGLE)
    assert not in_hull((2, 1), TRIANGLE)
    assert in_hull((Fraction(2, 3), Fraction(2, 3)), TRIANGLE)
    assert not in_hull((0, 0), [])
    # a degenerate hull: a segment in the plane
    assert in_hull((1, 1), [(0, 0), (2, 2)])
    assert not in_hull((1, 0), [(0, 0), (2, 2)])


def test_simplex_handles_negative_right_hand_sides():
    x = feasible_nonnegative([[1, -1], [0, 1]], [-1, 2])
    assert x == [1, 2]
    assert feasible_nonnegative([[1, 1]], [-1]) is None


def test_psi_on_big_ex():
    G = fixtures.load_fixture_graph("big_ex")
    rep = verify_affine_iso(G)
    assert rep.details["rank"] == len(G.inner_faces) == 5
    P = psi(G)
    assert len(P.A) == len(G.edge_ids)


def test_lattice_points_and_faces_of_fixtures():
    for name, G, _ in fixtures.fixture_graphs():
        verify_affine_iso(G)
        if len(G.inner_faces) <= 6:
            assert lattice_points_are_vertices(G).ok, name
        if len(G.inner_faces) <= 5:
            assert face_lattice_check(G).ok, name


def test_square_polytope():
    # the 4-cycle has two matchings: PM is a segment with three faces
    G = fixtures.load_fixture_graph("cycle4")
    faces, ms = matching_polytope_faces(G)
    assert len(ms) == 2 and len(faces) == 3
    subs, covers = elementary_subgraphs(G)
    assert len(subs) == 3 and len(covers) == 2


def test_size_limits():
    G = fixtures.load_fixture_graph("reduction_seq")
    with pytest.raises(TooLarge):
        lattice_points_are_vertices(G, max_faces=3)
    with pytest.raises(TooLarge):
        matching_polytope_faces(G, max_faces=3)


@given(st.integers(0, 10 ** 6), st.integers(1, 4))
def test_random_graphs(seed, n):
    G, _ = random_property_star_graph(random.Random(seed), n)
    verify_affine_iso(G)
    assert lattice_points_are_vertices(G).ok
    assert face_lattice_check(G).ok
