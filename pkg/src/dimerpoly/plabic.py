"""Plabic graphs in a disk, almost-perfect matchings with fixed boundary,
the pruned graph H, and the twisted Plücker formula as a cluster monomial.

A plabic graph is stored as a straight-line drawing: every vertex has a
position and a colour, boundary vertices are black and listed clockwise,
and the disk boundary is drawn as edges joining consecutive boundary
vertices.  Those boundary edges are the only edges whose ends share a
colour; they never enter a matching and carry no quiver arrows.

Faces are the regions of the drawing inside the disk.  Internal faces
(not touching the disk boundary) are mutable and labelled 1..m from left
to right; the face containing boundary edge (j-1, j) is frozen and
labelled m + j.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field

from .cluster import f_and_g, initial_seed, mutate_sequence, var_name
from .dimer import dimer_face_polynomial, enumerate_matchings, minimal_matching
from .errors import (InputError, MalformedRotation, MismatchReport, NotBipartite, NotDivisible,
                     NotReducedAsserted)
from .graph_core import (BLACK, WHITE, PlaneBipartiteGraph, check_property_star, dual_quiver,
                         find_reduction_sequence)
from .laurent import LaurentPoly
from .quiver import Quiver
from .reports import Report

INFINITE = 0


class PlabicGraph:
    """Plabic graph of type (k, n) given by a drawing.

    ``pos`` maps vertex -> (x, y, colour), ``boundary`` lists the boundary
    vertices clockwise (boundary vertex j is ``boundary[j-1]``), ``edges``
    maps edge id -> (u, v) for the internal and boundary-to-internal edges.
    The disk boundary edges are added here with fresh ids.
    """

    def __init__(self, pos, boundary, edges, reduced_asserted: bool = False, name: str = ""):
        self.pos = {v: (p[0], p[1]) for v, p in pos.items()}
        self.colors = {v: (BLACK if p[2] in ("b", "black", BLACK) else WHITE) for v, p in pos.items()}
        self.boundary = tuple(boundary)
        self.bindex = {v: j + 1 for j, v in enumerate(self.boundary)}
        self.reduced_asserted = reduced_asserted
        self.name = name
        self.edges = {}
        for e, (u, v) in edges.items():
            if self.colors[u] == self.colors[v]:
                raise NotBipartite(f"edge {e} joins two vertices of the same colour")
            b, w = (u, v) if self.colors[u] == BLACK else (v, u)
            self.edges[e] = (b, w)
        self.internal_edges = tuple(sorted(self.edges))
        nxt = max(self.edges, default=-1) + 1
        self.disk_edges = {}
        n = len(self.boundary)
        if n < 3:
            raise InputError("a plabic graph here needs at least three boundary vertices")
        for j in range(n):
            a, c = self.boundary[j - 1], self.boundary[j]
            self.disk_edges[nxt] = (a, c)
            self.edges[nxt] = (a, c)
            nxt += 1
        self._validate()
        self._build_rotation()
        self._build_faces()

    # -- structure ----------------------------------------------------------
    @property
    def n(self) -> int:
        return len(self.boundary)

    @property
    def internal_vertices(self):
        return sorted(v for v in self.colors if v not in self.bindex)

    @property
    def k(self) -> int:
        nb = sum(1 for c in self.colors.values() if c == BLACK)
        return self.n - (nb - (len(self.colors) - nb))

    def neighbours(self, v):
        out = []
        for e in self.rot[v]:
            if e in self.disk_edges:
                continue
            a, c = self.edges[e]
            out.append((e, c if a == v else a))
        return out

    def _validate(self):
        for j, v in enumerate(self.boundary):
            if self.colors[v] != BLACK:
                raise InputError(f"boundary vertex {j + 1} is not black")
            if len(self.neighbours_raw(v)) > 1:
                raise InputError(f"boundary vertex {j + 1} has more than one internal neighbour")
        for v in self.internal_vertices:
            nb = self.neighbours_raw(v)
            if not nb:
                raise InputError(f"internal vertex {v} is isolated")
            if len(nb) == 1 and nb[0] not in self.bindex:
                raise InputError(f"internal leaf {v} is not adjacent to the boundary")

    def neighbours_raw(self, v):
        out = []
        for e, (a, c) in self.edges.items():
            if e in self.disk_edges:
                continue
            if v == a:
                out.append(c)
            elif v == c:
                out.append(a)
        return out

    def _build_rotation(self):
        rot = {v: [] for v in self.colors}
        for e, (a, c) in self.edges.items():
            rot[a].append(e)
            rot[c].append(e)
        for v, inc in rot.items():
            x, y = self.pos[v]

            def ang(e, v=v, x=x, y=y):
                a, c = self.edges[e]
                u = c if a == v else a
                return math.atan2(self.pos[u][1] - y, self.pos[u][0] - x)
            inc.sort(key=ang)
        self.rot = {v: tuple(r) for v, r in rot.items()}

    def _next(self, h):
        # half-edge h = (edge, tail); walk with the face on the left
        e, t = h
        a, c = self.edges[e]
        v = c if t == a else a
        r = self.rot[v]
        return (r[r.index(e) - 1], v)

    def head(self, h):
        e, t = h
        a, c = self.edges[e]
        return c if t == a else a

    def _build_faces(self):
        seen = set()
        orbits = []
        for e in sorted(self.edges):
            for t in self.edges[e]:
                h = (e, t)
                if h in seen:
                    continue
                cyc = []
                while h not in seen:
                    seen.add(h)
                    cyc.append(h)
                    h = self._next(h)
                orbits.append(tuple(cyc))
        nv, ne = len(self.colors), len(self.edges)
        if nv - ne + len(orbits) != 2:
            raise MalformedRotation("drawing of the plabic graph is not a connected plane map")

        def area(cyc):
            tot = 0.0
            for h in cyc:
                (x0, y0), (x1, y1) = self.pos[h[1]], self.pos[self.head(h)]
                tot += x0 * y1 - x1 * y0
            return tot
        neg = [c for c in orbits if area(c) < 0]
        if len(neg) != 1:
            raise MalformedRotation("drawing has no unique outer region")
        inner = [c for c in orbits if c is not neg[0]]
        touching = [c for c in inner if any(h[0] in self.disk_edges for h in c)]
        internal = [c for c in inner if not any(h[0] in self.disk_edges for h in c)]

        def centroid(c):
            xs = [self.pos[h[1]] for h in c]
            return (sum(p[0] for p in xs) / len(xs), sum(p[1] for p in xs) / len(xs))
        internal.sort(key=centroid)
        m = len(internal)
        faces = {INFINITE: neg[0]}
        for i, c in enumerate(internal):
            faces[i + 1] = c
        for c in touching:
            # disk edge (j-1, j) is stored as (boundary[j-2], boundary[j-1])
            js = [self.bindex[self.disk_edges[h[0]][1]] for h in c if h[0] in self.disk_edges]
            faces[m + min(js)] = c
        self.faces = faces
        self.face_of = {h: f for f, c in faces.items() for h in c}
        self.mutable_faces = tuple(range(1, m + 1))
        self.frozen_faces = tuple(sorted(f for f in faces if f > m))

    @property
    def all_faces(self):
        return self.mutable_faces + self.frozen_faces

    def face_edge_set(self, f):
        return {h[0] for h in self.faces[f]}

    def face_vertex_set(self, f):
        return {h[1] for h in self.faces[f]}

    def white_count(self, f) -> int:
        return sum(1 for v in self.face_vertex_set(f) if self.colors[v] == WHITE)

    def boundary_edge_face(self, j):
        """Face containing the disk boundary edge (j-1, j), indices mod n."""
        a = self.boundary[(j - 2) % self.n]
        c = self.boundary[j - 1]
        for e, (x, y) in self.disk_edges.items():
            if (x, y) == (a, c):
                return next(f for f in (self.face_of[(e, a)], self.face_of[(e, c)]) if f != INFINITE)
        raise InputError(f"no boundary edge ({j - 1}, {j})")

    def quiver(self) -> Quiver:
        """Dual quiver with boundary-touching faces frozen."""
        labels = list(self.all_faces)
        idx = {f: i for i, f in enumerate(labels)}
        b = [[0] * len(labels) for _ in labels]
        for e in self.internal_edges:
            bl, wh = self.edges[e]
            bw_left, wb_left = self.face_of[(e, bl)], self.face_of[(e, wh)]
            if bw_left == wb_left or INFINITE in (bw_left, wb_left):
                continue
            i, j = idx[wb_left], idx[bw_left]
            b[i][j] += 1
            b[j][i] -= 1
        return Quiver(labels, b, len(self.mutable_faces))

    def x_vars(self):
        return tuple(var_name(f) for f in self.all_faces)

    def summary(self) -> dict:
        return {"name": self.name, "type": [self.k, self.n], "vertices": len(self.colors),
                "edges": len(self.internal_edges), "mutable_faces": list(self.mutable_faces),
                "frozen_faces": list(self.frozen_faces)}

    # -- io -----------------------------------------------------------------
    def to_json(self) -> dict:
        return {"format": "plabic", "name": self.name,
                "vertices": [{"id": v, "x": self.pos[v][0], "y": self.pos[v][1],
                              "color": self.colors[v]} for v in sorted(self.colors)],
                "boundary": list(self.boundary),
                "edges": [[e, *self.edges[e]] for e in self.internal_edges],
                "frozen": list(self.frozen_faces),
                "reducedAsserted": self.reduced_asserted}


def plabic_from_json(obj) -> PlabicGraph:
    if isinstance(obj, str):
        obj = json.loads(obj)
    pos = {v["id"]: (v["x"], v["y"], v["color"]) for v in obj["vertices"]}
    edges = {e: (u, v) for e, u, v in obj["edges"]}
    return PlabicGraph(pos, obj["boundary"], edges, obj.get("reducedAsserted", False),
                       obj.get("name", ""))


def load_plabic(path) -> PlabicGraph:
    with open(path) as fh:
        return plabic_from_json(json.load(fh))


# ---------------------------------------------------------------------------
# fixtures

def ladder_plabic(n: int, isolated: int = 0) -> PlabicGraph:
    """Reduced plabic graph for the top cell of Gr(2, n), n >= 4.

    A ladder of n - 3 squares.  The four corners reach the boundary (the
    two black corners through a degree-2 white vertex), and at each inner
    rung the white end does, alternating between the rows.  ``isolated``
    inserts that many boundary vertices with no internal neighbour just
    before the last one; each is a loop of the positroid, so every J
    containing it vanishes.
    """
    if n < 4:
        raise InputError("the ladder needs n >= 4")
    m = n - 3
    pos = {}
    edges = {}
    eid = itertools.count()

    def add(u, v):
        edges[next(eid)] = (u, v)

    for i in range(m + 1):
        pos[("t", i)] = (2 * i, 1, "b" if i % 2 == 0 else "w")
        pos[("s", i)] = (2 * i, -1, "w" if i % 2 == 0 else "b")
    for i in range(m + 1):
        add(("t", i), ("s", i))
        if i < m:
            add(("t", i), ("t", i + 1))
            add(("s", i), ("s", i + 1))
    boundary = []

    def spoke(v, bpos):
        bv = ("B", len(boundary) + 1)
        pos[bv] = (bpos[0], bpos[1], "b")
        if pos[v][2] == "b":
            mid = ("u", len(boundary) + 1)
            x, y = pos[v][0], pos[v][1]
            pos[mid] = ((x + bpos[0]) / 2, (y + bpos[1]) / 2, "w")
            add(v, mid)
            add(mid, bv)
        else:
            add(v, bv)
        boundary.append(bv)

    top = [i for i in range(1, m) if i % 2 == 1]       # t_i white
    bottom = [i for i in range(1, m) if i % 2 == 0]    # s_i white
    spoke(("t", 0), (0, 4))
    for i in top:
        spoke(("t", i), (2 * i, 4))
    spoke(("t", m), (2 * m, 4))
    spoke(("s", m), (2 * m + 3, -4))
    for i in reversed(bottom):
        spoke(("s", i), (2 * i, -4))
    for q in range(isolated):
        bv = ("B", len(boundary) + 1)
        pos[bv] = (-1 - q / isolated, -4, "b")
        boundary.append(bv)
    spoke(("s", 0), (-3, -4))
    # integer vertex ids keep the JSON compact
    order = sorted(pos, key=repr)
    ren = {v: i for i, v in enumerate(order)}
    return PlabicGraph({ren[v]: p for v, p in pos.items()}, [ren[v] for v in boundary],
                       {e: (ren[a], ren[b]) for e, (a, b) in edges.items()},
                       reduced_asserted=True,
                       name=f"ladder Gr(2,{n})" + (f" with {isolated} loop" if isolated else ""))


def direct_sum(A: PlabicGraph, B: PlabicGraph, after: int, dx: float) -> PlabicGraph:
    """Both graphs in one disk, B shifted right by ``dx`` and its boundary
    inserted after boundary vertex ``after`` of A.

    The caller picks ``after`` and ``dx`` so that the drawing stays plane;
    the result is the direct sum of the two positroids.
    """
    pos = {}
    for tag, G, shift in (("a", A, 0), ("b", B, dx)):
        for v, (x, y) in G.pos.items():
            pos[(tag, v)] = (x + shift, y, G.colors[v])
    bnd = [("a", v) for v in A.boundary[:after]] + [("b", v) for v in B.boundary] + \
          [("a", v) for v in A.boundary[after:]]
    edges = {}
    eid = itertools.count()
    for tag, G in (("a", A), ("b", B)):
        for e in G.internal_edges:
            edges[next(eid)] = tuple((tag, v) for v in G.edges[e])
    order = sorted(pos, key=repr)
    ren = {v: i for i, v in enumerate(order)}
    return PlabicGraph({ren[v]: p for v, p in pos.items()}, [ren[v] for v in bnd],
                       {e: (ren[a], ren[b]) for e, (a, b) in edges.items()},
                       reduced_asserted=A.reduced_asserted and B.reduced_asserted,
                       name=f"{A.name} + {B.name}")


def two_square_sum() -> PlabicGraph:
    """Two Gr(2,4) ladders side by side, type (4,8); J = {1,3,5,7} makes H
    two disjoint squares."""
    A = ladder_plabic(4)
    return direct_sum(A, A, 2, 10)


# ---------------------------------------------------------------------------
# almost-perfect matchings

def _internal_subgraph(G: PlabicGraph, J):
    """Vertices and edges left after removing the boundary and the
    neighbours of J; returns (vertices, edges, forced edges) or None."""
    J = set(J)
    forced = []
    gone = set()
    for j in J:
        nb = G.neighbours(G.boundary[j - 1])
        if len(nb) != 1:
            return None
        e, w = nb[0]
        if w in gone:
            return None
        gone.add(w)
        forced.append(e)
    verts = [v for v in G.internal_vertices if v not in gone]
    vs = set(verts)
    edges = [e for e in G.internal_edges if G.edges[e][0] in vs and G.edges[e][1] in vs]
    return verts, edges, frozenset(forced)


def _perfect_matchings(verts, edges, G):
    inc = {v: [] for v in verts}
    for e in edges:
        b, w = G.edges[e]
        inc[b].append(e)
        inc[w].append(e)
    out = []

    def rec(k, covered, chosen):
        while k < len(verts) and verts[k] in covered:
            k += 1
        if k == len(verts):
            out.append(frozenset(chosen))
            return
        v = verts[k]
        for e in inc[v]:
            b, w = G.edges[e]
            u = w if v == b else b
            if u in covered:
                continue
            covered.add(v)
            covered.add(u)
            chosen.append(e)
            rec(k + 1, covered, chosen)
            chosen.pop()
            covered.discard(v)
            covered.discard(u)
    rec(0, set(), [])
    return sorted(out, key=sorted)


def boundary_of(G: PlabicGraph, M) -> frozenset:
    out = set()
    for e in M:
        for v in G.edges[e]:
            if v in G.bindex:
                out.add(G.bindex[v])
    return frozenset(out)


def is_almost_perfect(G: PlabicGraph, M) -> bool:
    if any(e in G.disk_edges for e in M):
        return False
    cover = {}
    for e in M:
        for v in G.edges[e]:
            cover[v] = cover.get(v, 0) + 1
    return all(cover.get(v, 0) == 1 for v in G.internal_vertices) and \
        all(c == 1 for c in cover.values())


def _bw_wb(G: PlabicGraph, f):
    bw, wb = set(), set()
    for e, t in G.faces[f]:
        (bw if G.colors[t] == WHITE else wb).add(e)
    return bw, wb


@dataclass
class ApmLattice:
    J: tuple
    matchings: list
    covers: list            # (lower, upper, face)
    bottom: int | None

    def __len__(self):
        return len(self.matchings)

    def to_json(self):
        return {"J": list(self.J), "matchings": [sorted(M) for M in self.matchings],
                "covers": [list(c) for c in self.covers], "bottom": self.bottom}


def enumerate_apm(G: PlabicGraph, J) -> ApmLattice:
    """All almost-perfect matchings with boundary J and their flip lattice.

    An empty list means the Plücker coordinate P_J vanishes.
    """
    J = tuple(sorted(J))
    if len(set(J)) != len(J) or any(not 1 <= j <= G.n for j in J):
        raise InputError(f"boundary set {list(J)} is not a set of labels in 1..{G.n}")
    sub = _internal_subgraph(G, J) if len(J) == G.k else None
    if sub is None:
        return ApmLattice(J, [], [], None)
    verts, edges, forced = sub
    ms = [M | forced for M in _perfect_matchings(verts, edges, G)]
    if not ms:
        return ApmLattice(J, [], [], None)
    index = {M: i for i, M in enumerate(ms)}
    covers = []
    has_down = set()
    for i, M in enumerate(ms):
        for f in G.all_faces:
            fe = G.face_edge_set(f)
            if fe & set(G.disk_edges):
                continue
            bw, wb = _bw_wb(G, f)
            if bw <= M and not (wb & M):
                N = (M - bw) | wb
                if N not in index:
                    raise MismatchReport(f"down-flip at face {f} leaves the matching set")
                covers.append((index[N], i, f))
                has_down.add(i)
    bottoms = [i for i in range(len(ms)) if i not in has_down]
    if len(bottoms) != 1:
        raise MismatchReport(f"boundary {list(J)} has {len(bottoms)} minimal matchings")
    for M in ms:
        assert is_almost_perfect(G, M) and boundary_of(G, M) == frozenset(J)
    return ApmLattice(J, ms, covers, bottoms[0])


def achievable_boundaries(G: PlabicGraph):
    return [J for J in itertools.combinations(range(1, G.n + 1), G.k) if enumerate_apm(G, J).matchings]


# ---------------------------------------------------------------------------
# the pruned graph H

@dataclass
class PrunedGraph:
    J: tuple
    components: list        # PlaneBipartiteGraph, faces carry the labels of G
    used_edges: frozenset
    forced: frozenset

    @property
    def faces(self):
        return [f for H in self.components for f in H.inner_faces]

    def nontrivial(self):
        return [H for H in self.components if H.inner_faces]


def build_H(G: PlabicGraph, J, lattice: ApmLattice | None = None) -> PrunedGraph:
    """Drop the boundary, the neighbours of J and every edge in no matching.

    Each connected component becomes a plane bipartite graph whose inner
    faces are labelled by the faces of G they coincide with; a face of a
    component that is not a face of G raises MismatchReport.
    """
    lat = lattice or enumerate_apm(G, J)
    if not lat.matchings:
        raise InputError(f"boundary {list(J)} has no almost-perfect matching")
    verts, _, forced = _internal_subgraph(G, lat.J)
    used = frozenset().union(*lat.matchings) - forced
    adj = {v: [] for v in verts}
    for e in used:
        b, w = G.edges[e]
        adj[b].append(w)
        adj[w].append(b)
    seen = set()
    comps = []
    gface = {frozenset(G.faces[f]): f for f in G.all_faces}
    for v0 in verts:
        if v0 in seen:
            continue
        comp = {v0}
        stack = [v0]
        while stack:
            v = stack.pop()
            for u in adj[v]:
                if u not in comp:
                    comp.add(u)
                    stack.append(u)
        seen |= comp
        cedges = {e: G.edges[e] for e in used if G.edges[e][0] in comp}
        rot = {v: tuple(e for e in G.rot[v] if e in cedges) for v in comp}
        colors = {v: G.colors[v] for v in comp}
        tmp = PlaneBipartiteGraph(colors, cedges, rot)
        labels = {}
        outer = None
        for f, bnd in tmp.faces.items():
            halves = frozenset((h >> 1, tmp.tail(h)) for h in bnd)
            area = 0.0
            for h in bnd:
                (x0, y0), (x1, y1) = G.pos[tmp.tail(h)], G.pos[tmp.head(h)]
                area += x0 * y1 - x1 * y0
            if area <= 0:
                if outer is not None:
                    raise MismatchReport("component of H has two outer faces")
                outer = INFINITE
                labels[INFINITE] = bnd[0]
                continue
            if halves not in gface or gface[halves] not in G.mutable_faces:
                raise MismatchReport("a bounded face of H is not an internal face of G")
            labels[gface[halves]] = bnd[0]
        comps.append(PlaneBipartiteGraph(colors, cedges, rot, labels, INFINITE, check=False))
    return PrunedGraph(lat.J, comps, used, forced)


# ---------------------------------------------------------------------------
# twist formula and its cluster decomposition

def _count_on_face(G: PlabicGraph, M, f) -> int:
    return len(G.face_edge_set(f) & set(M))


def h_exponents(G: PlabicGraph, M) -> tuple:
    """h_f = w_f - |M on f| - 1 over all faces, mutable then frozen."""
    return tuple(G.white_count(f) - _count_on_face(G, M, f) - 1 for f in G.all_faces)


def bd_vector(G: PlabicGraph, J) -> tuple:
    """bd_f(J): j in J with no degree-1 neighbour whose edge (j-1, j) is on f."""
    out = {f: 0 for f in G.all_faces}
    for j in J:
        nb = G.neighbours(G.boundary[j - 1])
        if nb and len(G.neighbours_raw(nb[0][1])) == 1:
            continue
        out[G.boundary_edge_face(j)] += 1
    return tuple(out[f] for f in G.all_faces)


@dataclass
class TwistFormulaResult:
    J: tuple
    laurent: LaurentPoly
    bdMonomial: LaurentPoly
    decomposition: list = field(default_factory=list)    # (cluster variable, multiplicity)
    frozenMonomial: LaurentPoly | None = None
    matchings: int = 0

    def to_json(self):
        return {"J": list(self.J), "laurent": self.laurent.to_text(),
                "bdMonomial": self.bdMonomial.to_text(),
                "decomposition": [[z.to_text(), k] for z, k in self.decomposition],
                "frozenMonomial": self.frozenMonomial.to_text() if self.frozenMonomial else None,
                "matchings": self.matchings}


def twist_formula(G: PlabicGraph, J, lattice: ApmLattice | None = None) -> TwistFormulaResult:
    """x^{bd(J)} times the sum over matchings with boundary J of x^{h_M}."""
    lat = lattice or enumerate_apm(G, J)
    names = G.x_vars()
    bd = LaurentPoly.monomial(names, bd_vector(G, lat.J))
    terms = {}
    for M in lat.matchings:
        h = h_exponents(G, M)
        terms[h] = terms.get(h, 0) + 1
    return TwistFormulaResult(lat.J, bd * LaurentPoly(names, terms), bd, matchings=len(lat.matchings))


def _check_product_lattice(G, lat, P: PrunedGraph):
    """Restriction to H is a bijection onto the product of component
    lattices, and flips of G correspond to flips inside components."""
    comp_ms = [enumerate_matchings(H) for H in P.components]
    prod = {frozenset().union(*combo) for combo in itertools.product(*comp_ms)}
    restricted = {M - P.forced for M in lat.matchings}
    if restricted != prod or len(prod) != len(lat.matchings):
        return False
    faces = set(P.faces)
    if any(f not in faces for _, _, f in lat.covers):
        return False
    expected = 0
    sizes = [len(c) for c in comp_ms]
    for i, H in enumerate(P.components):
        local = 0
        for M in comp_ms[i]:
            for f in H.inner_faces:
                bw, wb = _bw_wb(G, f)
                if bw <= M and not (wb & M):
                    local += 1
        rest = 1
        for j, s in enumerate(sizes):
            if j != i:
                rest *= s
        expected += local * rest
    return expected == len(lat.covers)


def verify_plucker_cluster_monomial(G: PlabicGraph, J) -> Report:
    """Decompose the twist formula for P_J as a cluster monomial.

    The cluster side mutates the frozen-framed quiver of G along
    reduction sequences of the nontrivial components of H; each component
    must give an F-polynomial equal to its dimer face polynomial.  The
    leftover monomial Z and the frozen boundary correction are then
    solved for and the product is compared with the twist formula.
    """
    if not G.reduced_asserted:
        raise NotReducedAsserted(f"{G.name or 'graph'} is not asserted reduced")
    lat = enumerate_apm(G, J)
    names = G.x_vars()
    tw = twist_formula(G, J, lat)
    if not lat.matchings:
        rep = Report("plucker_cluster_monomial", True,
                     {"J": list(lat.J), "vanishing": True, "laurent": tw.laurent})
        rep.result = tw
        return rep
    Q = G.quiver()
    P = build_H(G, J, lat)
    details = {"J": list(lat.J), "vanishing": False, "matchings": len(lat.matchings),
               "components": [sorted(H.inner_faces) for H in P.components if H.inner_faces]}
    problems = []
    if not _check_product_lattice(G, lat, P):
        problems.append("lattice of G-matchings is not the product of component lattices")
    Hfaces = set(P.faces)
    # Q_H must be the induced subquiver of Q_G on the faces of H
    for H in P.nontrivial():
        QH = dual_quiver(H)
        if Q.induced(list(QH.labels)).b != QH.b:
            problems.append(f"quiver of component {sorted(H.inner_faces)} is not induced")
    cross = [(a, c) for a in Hfaces for c in Hfaces
             if Q.arrows(a, c) and
             not any(a in H.inner_faces and c in H.inner_faces for H in P.components)]
    if cross:
        problems.append(f"arrows between different components: {cross}")

    seed = initial_seed(Q)
    zs = []
    full_seq = []
    for H in P.nontrivial():
        if not check_property_star(H):
            problems.append(f"component {sorted(H.inner_faces)} fails property (*)")
        seq = list(find_reduction_sequence(H).faces)
        last = seq[-1]
        F, g, _ = f_and_g(Q, seq, last)
        D = dimer_face_polynomial(H)
        if F != D.with_vars(F.vars):
            problems.append(f"F-polynomial differs from D_H on component {sorted(H.inner_faces)}")
        bottom = minimal_matching(H)
        Hms = enumerate_matchings(H)
        for f, gf in zip(Q.mutable, g):
            low = _count_on_face(G, bottom, f)
            want = (G.white_count(f) - low - 1 if f in H.inner_faces
                    else max(_count_on_face(G, M, f) for M in Hms) - low)
            if gf != want:
                problems.append(f"g-vector entry at face {f} is {gf}, expected {want}")
        seed = mutate_sequence(seed, seq)
        z = seed.variable(last)
        zs.append((last, z))
        full_seq += seq
    # one seed holds all z_i together with x_f for f outside H: compatibility
    for last, z in zs:
        if seed.variable(last) != z:
            problems.append(f"cluster variable at {last} was changed by a later mutation")
    for f in G.mutable_faces:
        if f not in Hfaces and seed.variable(f) != LaurentPoly.var(names, var_name(f)):
            problems.append(f"x_{f} is not in the final seed")

    zprod = LaurentPoly.one(names)
    for _, z in zs:
        zprod = zprod * z
    target_terms = {}
    for M in lat.matchings:
        h = h_exponents(G, M - P.forced)
        target_terms[h] = target_terms.get(h, 0) + 1
    target = LaurentPoly(names, target_terms)
    Z = None
    try:
        Z = target.exact_div(zprod)
    except NotDivisible as exc:
        problems.append(f"sum over H-matchings is not divisible by the z product: {exc}")
    decomposition = []
    frozen_mono = None
    if Z is not None:
        if not Z.is_monomial():
            problems.append("quotient Z is not a monomial")
        else:
            (zexp, zc), = Z.terms.items()
            if zc != 1:
                problems.append(f"quotient Z has coefficient {zc}")
            for f, ex in zip(G.all_faces, zexp):
                if ex and f in Hfaces:
                    problems.append(f"Z involves x_{f}, a face of H")
                if f in G.mutable_faces and ex < 0:
                    problems.append(f"x_{f} appears in Z with negative power {ex}")
            on_face = [sum(1 for j in lat.J if G.boundary[j - 1] in G.face_vertex_set(f)) for f in G.all_faces]
            bd = bd_vector(G, lat.J)
            r = len(G.mutable_faces)
            if any(on_face[:r]) or any(bd[:r]):
                problems.append("boundary correction touches a mutable face")
            frozen_exp = [bd[i] - on_face[i] + (zexp[i] if i >= r else 0) for i in range(len(names))]
            frozen_mono = LaurentPoly.monomial(names, frozen_exp)
            for (last, z) in zs:
                decomposition.append((z, 1))
            for i, f in enumerate(G.mutable_faces):
                if zexp[i] > 0:
                    decomposition.append((LaurentPoly.var(names, var_name(f)), zexp[i]))
            rebuilt = frozen_mono
            for z, k in decomposition:
                rebuilt = rebuilt * (z ** k)
            if rebuilt != tw.laurent:
                problems.append("cluster monomial differs from the twist formula")
    tw.decomposition = decomposition
    tw.frozenMonomial = frozen_mono
    details.update({"laurent": tw.laurent, "sequence": full_seq,
                    "clusterVariables": [z for _, z in zs], "Z": Z,
                    "frozenMonomial": frozen_mono,
                    "decomposition": [(z, k) for z, k in decomposition],
                    "problems": problems})
    rep = Report("plucker_cluster_monomial", not problems, details)
    rep.result = tw
    if problems:
        raise MismatchReport("; ".join(problems), rep)
    return rep
