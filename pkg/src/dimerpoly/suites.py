"""Verification suites run by ``dimerpoly verify`` and by the acceptance tests.

Every suite returns a Report whose details are deterministic for a fixed
seed; wall-clock times are kept out of the details.
"""
from __future__ import annotations

import itertools
import random

from . import fixtures
from .cluster import adjacent_f_check, cluster_expansion, random_mutation_walk, verify_main_theorem
from .dimer import dimer_face_polynomial, edge_substitution, enumerate_matchings, partition_function
from .errors import DimerPolyError, NotDivisible
from .generators import random_property_star_graph
from .laurent import equal_up_to_unit
from .quiver import Quiver
from .reports import Report

SUITES = ("dimer", "main-theorem", "alexander", "two-bridge", "polytope", "connect-sum",
          "link-cluster", "plabic", "engine")


def generated_graphs(n: int = 50, max_faces: int = 10, seed: int = 0):
    """``n`` random property-(*) graphs with 1..max_faces inner faces."""
    rng = random.Random(seed)
    out = []
    for k in range(n):
        G, rs = random_property_star_graph(rng, rng.randint(1, max_faces))
        out.append((f"gen{k}", G, {"sequence": list(rs.faces)}))
    return out


def graph_corpus(n: int = 50, max_faces: int = 10, seed: int = 0):
    return fixtures.fixture_graphs() + generated_graphs(n, max_faces, seed)


def _fail(failures, name, exc):
    failures.append({"input": name, "error": f"{type(exc).__name__}: {exc}"})


# ---------------------------------------------------------------------------
# graphs

def dimer_suite(n=50, max_faces=10, seed=0) -> Report:
    """D_G by saturated chains, by heights, and back from Z_G by edge substitution."""
    failures = []
    sizes = []
    for name, G, _ in graph_corpus(n, max_faces, seed):
        try:
            ms = enumerate_matchings(G)
            by_height = dimer_face_polynomial(G, matchings=ms)
            by_chain = dimer_face_polynomial(G, "chain", matchings=ms)
            Z = partition_function(G, ms)
            ok = by_height == by_chain and edge_substitution(G, by_height) == Z
            if not ok:
                failures.append({"input": name, "error": "the three computations of D_G disagree"})
            sizes.append(len(ms))
        except DimerPolyError as exc:
            _fail(failures, name, exc)
    return Report("dimer", not failures, {"graphs": len(sizes), "matchings": sizes, "failures": failures})


def main_theorem_suite(n=50, max_faces=10, seed=0, depth_cap=12) -> Report:
    """F = D_G and g = h(bottom), plus the initial-cluster expansion."""
    failures = []
    checked = []
    for name, G, meta in graph_corpus(n, max_faces, seed):
        if not G.inner_faces:
            continue
        try:
            seq = meta.get("sequence")
            rep = verify_main_theorem(G, seq, depth_cap=depth_cap)
            if "g" in meta and rep.details["g"] != meta["g"]:
                failures.append({"input": name, "error": f"g-vector {rep.details['g']} differs from {meta['g']}"})
            if "matchings" in meta and rep.details["D"].nterms() != meta["matchings"]:
                failures.append({"input": name, "error": "matching count differs from the fixture"})
            cluster_expansion(G)
            checked.append([name, len(G.inner_faces), rep.details["D"].nterms(), list(rep.details["sequence"])])
        except DimerPolyError as exc:
            _fail(failures, name, exc)
    return Report("main-theorem", not failures, {"graphs": len(checked), "checked": checked,
                                              "failures": failures})


def polytope_suite(n=50, max_faces=10, seed=0, lattice_faces=6, face_lattice_faces=5) -> Report:
    from .polytope import face_lattice_check, lattice_points_are_vertices, verify_affine_iso
    failures = []
    counts = {"psi": 0, "lattice_points": 0, "face_lattice": 0}
    for name, G, _ in graph_corpus(n, max_faces, seed):
        try:
            verify_affine_iso(G)
            counts["psi"] += 1
            if len(G.inner_faces) <= lattice_faces:
                rep = lattice_points_are_vertices(G, lattice_faces)
                if not rep.ok:
                    failures.append({"input": name, "error": "lattice point outside the support",
                                     "details": rep.details})
                counts["lattice_points"] += 1
            if len(G.inner_faces) <= face_lattice_faces:
                rep = face_lattice_check(G)
                if not rep.ok:
                    failures.append({"input": name, "error": "face lattice mismatch", "details": rep.details})
                counts["face_lattice"] += 1
        except DimerPolyError as exc:
            _fail(failures, name, exc)
    return Report("polytope", not failures, {"counts": counts, "failures": failures})


# ---------------------------------------------------------------------------
# links

def compositions(total_max: int):
    """All tuples of positive integers with sum <= total_max."""
    out = []
    for s in range(1, total_max + 1):
        for cuts in itertools.product((0, 1), repeat=s - 1):
            parts, run = [], 1
            for c in cuts:
                if c:
                    parts.append(run)
                    run = 1
                else:
                    run += 1
            parts.append(run)
            out.append(tuple(parts))
    return out


def link_corpus(alpha_sum: int = 7):
    """Named links and C(alpha) for all alpha with sum <= alpha_sum whose
    diagram is connected, prime-like and free of nugatory crossings."""
    from .link import two_bridge, validate_diagram
    out = [(name, fixtures.load_link(name)) for name in fixtures.LINKS]
    skipped = []
    for alpha in compositions(alpha_sum):
        L, _ = two_bridge(alpha)
        if validate_diagram(L):
            out.append((f"C{list(alpha)}", L))
        else:
            skipped.append(list(alpha))
    return out, skipped


def alexander_suite(alpha_sum=7) -> Report:
    """State sum versus dimer specialization on every segment, the clock
    lattice certificate, and the Whitehead golden data."""
    from .link import alexander_from_dimer, alexander_matrix_oracle, clock_lattice, kauffman_states
    links, skipped = link_corpus(alpha_sum)
    failures = []
    for name, L in links:
        try:
            oracle = alexander_matrix_oracle(L)
            for i in L.segment_labels:
                spec, rep = alexander_from_dimer(L, i)
                if not equal_up_to_unit(spec, oracle)[0]:
                    failures.append({"input": name, "segment": i, "error": "differs from the Alexander matrix"})
                states, cert = kauffman_states(L, i)
                if not cert.holds:
                    failures.append({"input": name, "segment": i, "error": "clock lattice is not the dimer lattice"})
        except DimerPolyError as exc:
            _fail(failures, name, exc)
    gold = fixtures.golden("whitehead_i7")
    W = fixtures.load_link("whitehead")
    i = gold["segment"]
    states, covers = clock_lattice(W, i)
    spec, rep = alexander_from_dimer(W, i)
    seen = {"states": len(states), "covers": len(covers),
            "stateSum": rep.details["state_sum"].to_text(),
            "dimerPolynomial": rep.details["D"].to_text(), "specialized": spec.to_text()}
    for key, val in seen.items():
        if val != gold[key]:
            failures.append({"input": "whitehead", "error": f"{key} {val} differs from the golden file"})
    return Report("alexander", not failures, {"links": len(links), "skipped_alpha": skipped,
                                              "failures": failures})


def two_bridge_suite(alpha_sum=8) -> Report:
    from .link import flock_snake_equivalence, two_bridge, validate_diagram
    failures = []
    skipped = []
    done = 0
    for alpha in compositions(alpha_sum):
        if not validate_diagram(two_bridge(alpha)[0]):
            skipped.append(list(alpha))
            continue
        try:
            flock_snake_equivalence(alpha)
            done += 1
        except DimerPolyError as exc:
            _fail(failures, f"C{list(alpha)}", exc)
    return Report("two-bridge", not failures, {"alphas": done, "skipped_alpha": skipped,
                                               "failures": failures})


def connect_sum_suite() -> Report:
    from .link import connect_sum_check, exterior_segments
    T = fixtures.load_link("trefoil")
    H = fixtures.load_link("hopf")
    failures = []
    results = {}
    for name, L2 in (("trefoil#trefoil", T), ("trefoil#hopf", H)):
        try:
            rep = connect_sum_check(T, exterior_segments(T)[0], L2, exterior_segments(L2)[0])
            results[name] = rep.details
            if not rep.ok:
                failures.append({"input": name, "error": "connect sum check failed"})
        except DimerPolyError as exc:
            _fail(failures, name, exc)
    return Report("connect-sum", not failures, {"results": results, "failures": failures})


def link_cluster_suite() -> Report:
    from .link import link_cluster_check
    failures = []
    for name in fixtures.LINKS:
        try:
            link_cluster_check(fixtures.load_link(name))
        except DimerPolyError as exc:
            _fail(failures, name, exc)
    return Report("link-cluster", not failures, {"links": list(fixtures.LINKS), "failures": failures})


# ---------------------------------------------------------------------------
# plabic graphs and the mutation engine

def plabic_suite() -> Report:
    from .plabic import enumerate_apm, verify_plucker_cluster_monomial
    failures = []
    summary = {}
    for name in fixtures.plabic_names():
        G = fixtures.load_fixture_plabic(name)
        achieved = vanished = 0
        for J in itertools.combinations(range(1, G.n + 1), G.k):
            try:
                lat = enumerate_apm(G, J)
                rep = verify_plucker_cluster_monomial(G, J)
                tw = rep.result
                if rep.details["vanishing"]:
                    vanished += 1
                    if lat.matchings or not tw.laurent.is_zero():
                        failures.append({"input": name, "J": list(J), "error": "vanishing mismatch"})
                else:
                    achieved += 1
            except DimerPolyError as exc:
                _fail(failures, f"{name} J={list(J)}", exc)
        summary[name] = {"type": [G.k, G.n], "achievable": achieved, "vanishing": vanished}
    return Report("plabic", not failures, {"fixtures": summary, "failures": failures})


FINITE_TYPE = {
    "A2": [[0, 1], [-1, 0]],
    "A3": [[0, 1, 0], [-1, 0, 1], [0, -1, 0]],
    "A3cyc": [[0, 1, -1], [-1, 0, 1], [1, -1, 0]],
    "A1xA1": [[0, 0], [0, 0]],
    "A4": [[0, 1, 0, 0], [-1, 0, 1, 0], [0, -1, 0, 1], [0, 0, -1, 0]],
    "D4": [[0, 1, 0, 0], [-1, 0, -1, -1], [0, 1, 0, 0], [0, 1, 0, 0]],
}


def engine_suite(mutations=10_000, adjacent=100, seed=0, walk=50) -> Report:
    """Random mutation walks on finite-type quivers (every exchange must
    divide exactly) and random adjacent-seed F/g checks."""
    rng = random.Random(seed)
    quivers = {k: Quiver(list(range(1, len(b) + 1)), b) for k, b in FINITE_TYPE.items()}
    names = sorted(quivers)
    done = 0
    errors = []
    while done < mutations:
        name = names[(done // walk) % len(names)]
        steps = min(walk, mutations - done)
        try:
            random_mutation_walk(quivers[name], steps, rng)
        except NotDivisible as exc:
            errors.append({"quiver": name, "error": str(exc)})
        done += steps
    adj_fail = []
    for _ in range(adjacent):
        name = rng.choice(names)
        Q = quivers[name]
        b = rng.choice(Q.mutable)
        path = [rng.choice(Q.mutable) for _ in range(rng.randint(1, 4))]
        rep = adjacent_f_check(Q, b, path)
        stated = rep.details["results"]["as_stated"]
        if not (stated["F"] and stated["g"]):
            adj_fail.append({"quiver": name, "b": b, "path": path})
    return Report("engine", not errors and not adj_fail,
                  {"mutations": done, "not_divisible": errors, "adjacent_checks": adjacent,
                   "adjacent_failures": adj_fail})


def run_suite(name: str, graphs=50, max_faces=10, seed=0, depth_cap=12) -> Report:
    if name == "dimer":
        return dimer_suite(graphs, max_faces, seed)
    if name == "main-theorem":
        return main_theorem_suite(graphs, max_faces, seed, depth_cap)
    if name == "polytope":
        return polytope_suite(graphs, max_faces, seed)
    if name == "alexander":
        return alexander_suite()
    if name == "two-bridge":
        return two_bridge_suite()
    if name == "connect-sum":
        return connect_sum_suite()
    if name == "link-cluster":
        return link_cluster_suite()
    if name == "plabic":
        return plabic_suite()
    if name == "engine":
        return engine_suite(seed=seed)
    raise ValueError(f"unknown suite {name!r}")
