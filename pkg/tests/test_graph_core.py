import random

import pytest
from hypothesis import given, strategies as st

from dimerpoly import fixtures
from dimerpoly.errors import DegreeViolation, DimerPolyError, MalformedRotation, NotBipartite
from dimerpoly.generators import random_property_star_graph
from dimerpoly.graph_core import (BLACK, bigon, build_graph, check_property_star, contract_all,
                                  cycle_graph, dual_quiver, find_reduction_sequence, from_json,
                                  isomorphic, replay, replay_faces, single_edge, square_move,
                                  undo_square)


def test_bigon_and_cycle_faces():
    for G in (bigon(), cycle_graph(2), cycle_graph(3)):
        assert list(G.inner_faces) == [1]
        assert G.face_length(1) == G.face_length(G.outer)
    assert single_edge().is_single_edge()
    assert not single_edge().inner_faces


def test_euler_characteristic_of_fixtures():
    for name, G, _ in fixtures.fixture_graphs():
        assert len(G.vertices) - len(G.edges) + len(G.faces) == 2, name


def test_json_round_trip_keeps_labels():
    for name, G, _ in fixtures.fixture_graphs():
        H = from_json(G.dumps())
        assert isomorphic(G, H, labels=True), name


def test_colour_clash_is_rejected():
    with pytest.raises(NotBipartite):
        build_graph([(0, 1), (1, 2)], {0: [0], 1: [0, 1], 2: [1]})


def test_unknown_half_edge_in_rotation():
    obj = bigon().to_json()
    obj["rotations"]["0"] = [0, 99]
    with pytest.raises(MalformedRotation):
        from_json(obj)


def test_property_star_witness():
    # path b0 - w1 - b2 - w3: the middle edge is in no perfect matching
    G = build_graph([(0, 1), (2, 1), (2, 3)], {0: [0], 1: [0, 1], 2: [1, 2], 3: [2]})
    cert = check_property_star(G)
    assert not cert.holds and cert.witness == 1
    assert check_property_star(fixtures.load_fixture_graph("big_ex")).holds


def test_quiver_fixture_has_a_double_arrow():
    Q = dual_quiver(fixtures.load_fixture_graph("quiver_ex"))
    assert Q.arrows(1, 3) == 2
    assert Q.arrows(3, 1) == -2


def test_big_ex_quiver_matches_fixture():
    G = fixtures.load_fixture_graph("big_ex")
    assert dual_quiver(G) == fixtures.load_fixture_quiver("big_ex")


def test_published_sequences_replay():
    for name in ("big_ex", "reduction_seq"):
        G = fixtures.load_fixture_graph(name)
        seq = fixtures.GRAPH_META[name]["sequence"]
        assert replay_faces(G, seq).faces == seq


def test_square_move_degree_check():
    with pytest.raises(DegreeViolation):
        square_move(cycle_graph(2), 1)


def test_square_move_is_undone():
    G = contract_all(fixtures.load_fixture_graph("reduction_seq"))
    done = 0
    for f in G.inner_faces:
        try:
            G2, _ = square_move(G, f)
        except DimerPolyError:
            continue
        assert isomorphic(contract_all(undo_square(G2, f)), G, labels=False)
        done += 1
    assert done


@given(st.integers(0, 10 ** 6), st.integers(1, 7))
def test_generated_graphs_have_property_star(seed, n):
    G, rs = random_property_star_graph(random.Random(seed), n)
    assert check_property_star(G, cross_check=False).holds
    assert all(G.colors[b] == BLACK for b, _ in G.edges.values())
    # both the generator's trace and a fresh search reduce G to a single edge
    assert replay(G, rs.fullTrace)[-1].is_single_edge()
    find_reduction_sequence(G)


def test_quadrilaterals_never_form_two_cycles():
    from dimerpoly.suites import graph_corpus
    for name, G, _ in graph_corpus(60, 10, 11):
        dual_quiver(G, debug=True)
