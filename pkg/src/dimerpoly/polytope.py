"""The affine map from the Newton polytope of D_G onto the perfect matching
polytope, lattice points of the Newton polytope, and elementary subgraphs.

All membership and rank questions are answered exactly: ranks by sympy's
rational row reduction, hull membership by a small Fraction simplex.  Qhull
(through scipy) only proposes facets, which are then re-verified exactly.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from sympy import Matrix

from .dimer import dimer_face_polynomial, enumerate_matchings, height, minimal_matching
from .errors import MismatchReport, TooLarge
from .graph_core import PlaneBipartiteGraph, face_edge_classes
from .reports import Report

MAX_LATTICE_FACES = 6
MAX_FACE_LATTICE_FACES = 5


@dataclass
class AffineMatchingMap:
    faces: tuple          # inner faces, column order
    edges: tuple          # edge ids, row order
    A: list               # len(edges) x len(faces) integer matrix
    base: tuple           # indicator vector of the bottom matching

    def __call__(self, x):
        return tuple(sum(a * xi for a, xi in zip(row, x)) + b for row, b in zip(self.A, self.base))

    def rank(self) -> int:
        if not self.faces:
            return 0
        return Matrix(self.A).rank()

    def to_json(self):
        return {"faces": list(self.faces), "edges": list(self.edges), "A": self.A,
                "base": list(self.base)}


def indicator(G: PlaneBipartiteGraph, M) -> tuple:
    return tuple(1 if e in M else 0 for e in G.edge_ids)


def face_vector(G: PlaneBipartiteGraph, f) -> tuple:
    """v_f: +1 on the BlackWhite edges of f, -1 on the WhiteBlack ones."""
    bw, wb = face_edge_classes(G, f)
    v = {e: 0 for e in G.edge_ids}
    for e in bw:
        v[e] += 1
    for e in wb:
        v[e] -= 1
    return tuple(v[e] for e in G.edge_ids)


def psi(G: PlaneBipartiteGraph, matchings=None) -> AffineMatchingMap:
    if matchings is None:
        matchings = enumerate_matchings(G)
    faces = tuple(G.inner_faces)
    cols = [face_vector(G, f) for f in faces]
    A = [[cols[j][i] for j in range(len(faces))] for i in range(len(G.edge_ids))]
    base = indicator(G, minimal_matching(G, matchings=matchings))
    return AffineMatchingMap(faces, tuple(G.edge_ids), A, base)


def verify_affine_iso(G: PlaneBipartiteGraph) -> Report:
    """psi(height(M)) = chi_M for every matching, and A has full column rank."""
    ms = enumerate_matchings(G)
    P = psi(G, ms)
    bottom = minimal_matching(G, matchings=ms)
    bad = []
    images = set()
    for M in ms:
        h = height(G, M, bottom)
        x = tuple(h[f] for f in P.faces)
        img = P(x)
        images.add(img)
        if img != indicator(G, M):
            bad.append(sorted(M))
    rank = P.rank()
    ok = not bad and rank == len(P.faces) and len(images) == len(ms)
    rep = Report("affine_iso", ok, {"matchings": len(ms), "rank": rank, "faces": len(P.faces),
                                    "failures": bad})
    if not ok:
        raise MismatchReport("psi does not carry heights to indicator vectors", rep)
    return rep


# ---------------------------------------------------------------------------
# hull membership

def feasible_nonnegative(A, b):
    """Exact Phase-I simplex: a rational x >= 0 with A x = b, or None.

    Bland's rule keeps it from cycling; the systems here are tiny.
    """
    m, n = len(A), len(A[0]) if A else 0
    rows = []
    for i in range(m):
        r = [Fraction(x) for x in A[i]]
        rhs = Fraction(b[i])
        if rhs < 0:
            r, rhs = [-x for x in r], -rhs
        art = [Fraction(int(j == i)) for j in range(m)]
        rows.append(r + art + [rhs])
    basis = [n + i for i in range(m)]
    width = n + m
    # objective row: minimise the sum of artificials
    obj = [-sum(rows[i][j] for i in range(m)) for j in range(width + 1)]
    for i in range(m):
        obj[n + i] = Fraction(0)
    while True:
        enter = next((j for j in range(width) if obj[j] < 0), None)
        if enter is None:
            break
        best = None
        for i in range(m):
            if rows[i][enter] > 0:
                ratio = rows[i][-1] / rows[i][enter]
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:        # cannot happen in phase one, the objective is bounded
            break
        i = best[1]
        piv = rows[i][enter]
        rows[i] = [x / piv for x in rows[i]]
        for k in range(m):
            if k != i and rows[k][enter]:
                f = rows[k][enter]
                rows[k] = [x - f * y for x, y in zip(rows[k], rows[i])]
        f = obj[enter]
        obj = [x - f * y for x, y in zip(obj, rows[i])]
        basis[i] = enter
    if obj[-1] != 0:
        return None
    x = [Fraction(0)] * n
    for i, j in enumerate(basis):
        if j < n:
            x[j] = rows[i][-1]
    return x


def in_hull(point, vertices) -> bool:
    """Exact test: is ``point`` a convex combination of ``vertices``?"""
    vertices = [tuple(v) for v in vertices]
    if not vertices:
        return False
    A = [[Fraction(v[i]) for v in vertices] for i in range(len(point))] + [[1] * len(vertices)]
    b = [Fraction(x) for x in point] + [1]
    lam = feasible_nonnegative(A, b)
    if lam is None:
        return False
    if any(sum(a * l for a, l in zip(row, lam)) != r for row, r in zip(A, b)):
        raise MismatchReport("simplex returned a point that is not a convex combination")
    return True


def lattice_points_are_vertices(G: PlaneBipartiteGraph, max_faces: int = MAX_LATTICE_FACES) -> Report:
    """Every integer point of Newton(D_G) is an exponent of D_G."""
    if len(G.inner_faces) > max_faces:
        raise TooLarge(f"{len(G.inner_faces)} inner faces exceed the limit {max_faces}")
    D = dimer_face_polynomial(G)
    support = sorted(D.terms)
    lo, hi = D.min_exponents(), D.max_exponents()
    box = list(itertools.product(*[range(a, b + 1) for a, b in zip(lo, hi)]))
    sup = set(support)
    members = []
    for p in box:
        if p in sup or in_hull(p, support):
            members.append(p)
    extra = [p for p in members if p not in sup]
    ok = not extra
    return Report("lattice_points_are_vertices", ok,
                  {"supportPoints": len(support), "boxPoints": len(box),
                   "hullMembers": len(members), "verdict": "pass" if ok else "fail",
                   "nonSupportMembers": extra})


# ---------------------------------------------------------------------------
# elementary subgraphs and faces of PM(G)

def elementary_subgraphs(G: PlaneBipartiteGraph, max_matchings: int = 4096, matchings=None):
    """All distinct unions of nonempty sets of perfect matchings.

    Returns (subgraphs sorted by size then edges, covering pairs (i, j) with
    subgraph i a maximal proper subset of subgraph j).
    """
    if matchings is None:
        matchings = enumerate_matchings(G)
    if len(matchings) > max_matchings:
        raise TooLarge(f"{len(matchings)} matchings exceed the limit {max_matchings}")
    seen = set(matchings)
    frontier = list(seen)
    while frontier:
        new = []
        for S in frontier:
            for M in matchings:
                U = S | M
                if U not in seen:
                    seen.add(U)
                    new.append(U)
        frontier = new
    subs = sorted(seen, key=lambda S: (len(S), sorted(S)))
    covers = []
    for j, T in enumerate(subs):
        below = [i for i, S in enumerate(subs) if S < T]
        for i in below:
            if not any(subs[i] < subs[k] < T for k in below if k != i):
                covers.append((i, j))
    return subs, covers


def _affine_coordinates(points):
    """Project 0/1 points onto coordinates spanning their affine hull."""
    p0 = points[0]
    diffs = [[a - b for a, b in zip(p, p0)] for p in points[1:]]
    if not diffs:
        return [()], 0
    M = Matrix(diffs)
    _, pivots = M.rref()
    # pivot columns of the difference matrix span the affine hull's directions
    coords = [tuple(p[c] for c in pivots) for p in points]
    return coords, len(pivots)


def _exact_facets(coords, dim):
    """Vertex sets of facets: Qhull proposals re-verified with exact arithmetic."""
    import numpy as np
    from scipy.spatial import ConvexHull
    arr = np.array(coords, dtype=float)
    hull = ConvexHull(arr)
    facets = set()
    for eq in hull.equations:
        cand = [k for k in range(len(coords)) if abs(arr[k] @ eq[:-1] + eq[-1]) < 1e-7]
        pts = [coords[k] for k in cand]
        # exact normal: null space of the differences
        D = Matrix([[Fraction(a) - Fraction(b) for a, b in zip(p, pts[0])] for p in pts[1:]])
        ns = D.nullspace()
        if len(ns) != 1:
            raise MismatchReport("facet proposal from the hull code does not span a hyperplane")
        nvec = ns[0]
        val = sum(nvec[i] * pts[0][i] for i in range(dim))
        side = [sum(nvec[i] * q[i] for i in range(dim)) - val for q in coords]
        if not (all(x <= 0 for x in side) or all(x >= 0 for x in side)):
            raise MismatchReport("hull facet proposal is not supporting")
        facets.add(frozenset(k for k, x in enumerate(side) if x == 0))
    return facets


def matching_polytope_faces(G: PlaneBipartiteGraph, max_faces: int = MAX_FACE_LATTICE_FACES, matchings=None):
    """Nonempty faces of PM(G) as sets of matchings (facet-vertex incidence)."""
    if len(G.inner_faces) > max_faces:
        raise TooLarge(f"{len(G.inner_faces)} inner faces exceed the limit {max_faces}")
    if matchings is None:
        matchings = enumerate_matchings(G)
    pts = [indicator(G, M) for M in matchings]
    coords, dim = _affine_coordinates(pts)
    everything = frozenset(range(len(pts)))
    if dim == 0:
        return [everything], matchings
    if dim == 1:
        lo = min(range(len(pts)), key=lambda k: coords[k])
        hi = max(range(len(pts)), key=lambda k: coords[k])
        return [frozenset([lo]), frozenset([hi]), everything], matchings
    facets = _exact_facets(coords, dim)
    faces = {everything} | set(facets)
    frontier = set(facets)
    while frontier:
        new = set()
        for F in frontier:
            for H in facets:
                X = F & H
                if X and X not in faces:
                    new.add(X)
        faces |= new
        frontier = new
    return sorted(faces, key=lambda F: (len(F), sorted(F))), matchings


def face_lattice_check(G: PlaneBipartiteGraph) -> Report:
    """Elementary subgraphs versus faces of PM(G), matched by their edge unions."""
    ms = enumerate_matchings(G)
    subs, _ = elementary_subgraphs(G, matchings=ms)
    faces, _ = matching_polytope_faces(G, matchings=ms)
    unions = {frozenset().union(*(ms[k] for k in F)) for F in faces}
    ok = len(unions) == len(faces) and unions == set(subs)
    return Report("face_lattice", ok, {"elementary_subgraphs": len(subs), "pm_faces": len(faces)})
