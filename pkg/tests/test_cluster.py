import random

import pytest
from hypothesis import given, strategies as st

from dimerpoly import fixtures
from dimerpoly.cluster import (adjacent_f_check, cluster_expansion, f_and_g, initial_seed,
                               mutate_seed, random_mutation_walk, random_quiver, verify_main_theorem)
from dimerpoly.dimer import dimer_face_polynomial
from dimerpoly.errors import FrozenVertex, InputError
from dimerpoly.quiver import Quiver
from dimerpoly.suites import FINITE_TYPE


def test_rank_one():
    Q = fixtures.load_fixture_quiver("rank1")
    F, g, _ = f_and_g(Q, [1], 1)
    assert F.to_text() == "1 + y1"
    assert g == (-1,)
    F, g, _ = f_and_g(Q, [], 1)
    assert F.to_text() == "1" and g == (1,)


def test_quiver_mutation_is_an_involution():
    Q = Quiver([1, 2, 3], FINITE_TYPE["A3cyc"])
    for k in Q.mutable:
        assert Q.mutate(k).mutate(k) == Q
    # mutating the oriented 3-cycle at a vertex gives a path
    assert Q.mutate(1).arrow_count() == 2


def test_frozen_vertices_do_not_mutate():
    Q = Quiver([1, 2], [[0, 1], [-1, 0]], r=1)
    with pytest.raises(FrozenVertex):
        Q.mutate(2)


def test_bad_matrices():
    with pytest.raises(InputError):
        Quiver([1, 2], [[0, 1], [1, 0]])
    with pytest.raises(InputError):
        Quiver([1, 1], [[0, 1], [-1, 0]])


def test_pentagon_periodicity():
    Q = Quiver([1, 2], FINITE_TYPE["A2"])
    seed = initial_seed(Q)
    seen = set()
    for k in [1, 2, 1, 2, 1]:
        seed = mutate_seed(seed, k)
        seen.update(z.to_text() for z in seed.cluster)
    # type A2 has five cluster variables and the walk returns to x1, x2 swapped
    assert len(seen) == 5
    assert tuple(z.to_text() for z in seed.cluster) == ("x2", "x1")


def test_big_ex_main_theorem():
    G = fixtures.load_fixture_graph("big_ex")
    meta = fixtures.GRAPH_META["big_ex"]
    rep = verify_main_theorem(G, meta["sequence"])
    assert rep.details["g"] == meta["g"]
    assert rep.details["F"] == dimer_face_polynomial(G)
    Q = fixtures.load_fixture_quiver("big_ex")
    F, g, _ = f_and_g(Q, meta["sequence"], 1)
    assert F == dimer_face_polynomial(G)


def test_cluster_expansion_of_big_ex():
    z, d, _ = cluster_expansion(fixtures.load_fixture_graph("big_ex"))
    assert d == (1, 1, 1, 1, 1)
    assert z.nterms() == 12


def test_main_theorem_on_fixtures():
    for name, G, meta in fixtures.fixture_graphs():
        verify_main_theorem(G, meta.get("sequence"))


@given(st.integers(0, 10 ** 6))
def test_walks_divide_exactly(seed):
    rng = random.Random(seed)
    Q = random_quiver(3, rng)
    random_mutation_walk(Q, 6, rng)


@given(st.sampled_from(sorted(FINITE_TYPE)), st.integers(0, 10 ** 6))
def test_adjacent_seeds(name, seed):
    rng = random.Random(seed)
    Q = Quiver(list(range(1, len(FINITE_TYPE[name]) + 1)), FINITE_TYPE[name])
    b = rng.choice(Q.mutable)
    path = [rng.choice(Q.mutable) for _ in range(rng.randint(1, 4))]
    rep = adjacent_f_check(Q, b, path)
    assert rep.details["results"]["as_stated"] == {"F": True, "g": True}
