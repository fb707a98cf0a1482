"""Bipartite plane graphs as rotation systems.

Conventions used throughout the package:

* every edge ``e`` joins a black and a white vertex; its two half-edges are
  ``2*e`` (black -> white) and ``2*e + 1`` (white -> black);
* ``rot[v]`` lists the edges at ``v`` in counterclockwise order;
* a face is an orbit of :meth:`PlaneBipartiteGraph.next_half`, walked with
  the face on the left.  For an inner face this walk is counterclockwise.

Faces carry labels.  A label is attached to a face through an anchor
half-edge on its boundary, which lets moves keep the labels of the faces
they do not destroy.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable

import networkx as nx

from .errors import (DegreeViolation, Disconnected, EdgeNotOnFace, MalformedRotation,
                     NotBipartite, PatternMismatch, SearchExhausted)
from .quiver import Quiver
from .reports import Certificate

BLACK, WHITE = "b", "w"


def twin(h: int) -> int:
    return h ^ 1


def edge_of(h: int) -> int:
    return h >> 1


class PlaneBipartiteGraph:
    """Immutable bipartite plane graph with labelled faces."""

    def __init__(self, colors, edges, rot, face_labels=None, outer=None, outer_hint=None,
                 check=True):
        self.colors = dict(colors)
        self.edges = {e: tuple(bw) for e, bw in edges.items()}
        self.rot = {v: tuple(r) for v, r in rot.items()}
        if check:
            self._validate()
        self._build_faces(face_labels, outer, outer_hint)

    # -- construction -------------------------------------------------------
    def _validate(self):
        for v, c in self.colors.items():
            if c not in (BLACK, WHITE):
                raise NotBipartite(f"vertex {v} has colour {c!r}")
        inc = {v: [] for v in self.colors}
        for e, (b, w) in self.edges.items():
            if b == w:
                raise NotBipartite(f"edge {e} is a loop at vertex {b}")
            if self.colors.get(b) != BLACK or self.colors.get(w) != WHITE:
                raise NotBipartite(f"edge {e} does not join a black vertex to a white one")
            inc[b].append(e)
            inc[w].append(e)
        if set(self.rot) != set(self.colors):
            bad = set(self.rot) ^ set(self.colors)
            raise MalformedRotation(f"rotation missing or extra for vertices {sorted(bad, key=repr)}")
        for v, r in self.rot.items():
            if sorted(r) != sorted(inc[v]):
                raise MalformedRotation(f"rotation at vertex {v} is {list(r)}, incident edges are {sorted(inc[v])}")
        if not self.colors:
            raise Disconnected("graph has no vertices")
        # connectivity
        start = next(iter(self.colors))
        seen = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for e in self.rot[v]:
                u = self.other(e, v)
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        if len(seen) != len(self.colors):
            missing = sorted(set(self.colors) - seen, key=repr)
            raise Disconnected(f"vertex {missing[0]} is not reachable from vertex {start}")

    def _build_faces(self, face_labels, outer, outer_hint):
        orbit_of = {}
        orbits = []
        for e in sorted(self.edges):
            for h in (2 * e, 2 * e + 1):
                if h in orbit_of:
                    continue
                cyc = []
                x = h
                while x not in orbit_of:
                    orbit_of[x] = len(orbits)
                    cyc.append(x)
                    x = self.next_half(x)
                if x != h:
                    raise MalformedRotation("face walk did not close up")
                orbits.append(tuple(cyc))
        nv, ne, nf = len(self.colors), len(self.edges), len(orbits)
        if ne == 0:
            nf = 1
        if nv - ne + nf != 2:
            raise MalformedRotation(f"rotation system is not planar: V-E+F = {nv - ne + nf}")
        if face_labels is None:
            if ne == 0:
                self.faces = {0: ()}
                self.face_of = {}
                self.outer = 0
                self.anchors = {0: None}
                return
            if outer_hint is not None:
                if outer_hint not in orbit_of:
                    raise MalformedRotation(f"outer hint {outer_hint} is not a half-edge")
                oi = orbit_of[outer_hint]
            else:
                oi = min(range(len(orbits)), key=lambda i: (-len(orbits[i]), min(orbits[i])))
            order = sorted(range(len(orbits)), key=lambda i: min(orbits[i]))
            face_labels = {0: min(orbits[oi])}
            k = 1
            for i in order:
                if i != oi:
                    face_labels[k] = min(orbits[i])
                    k += 1
            outer = 0
        faces = {}
        face_of = {}
        anchors = {}
        hit = [None] * len(orbits)
        for lab, anchor in face_labels.items():
            if anchor not in orbit_of:
                raise MalformedRotation(f"face label {lab} is anchored at unknown half-edge {anchor}")
            i = orbit_of[anchor]
            if hit[i] is not None:
                raise MalformedRotation(f"face labels {hit[i]} and {lab} name the same face")
            hit[i] = lab
            cyc = orbits[i]
            j = cyc.index(anchor)
            faces[lab] = cyc[j:] + cyc[:j]
            anchors[lab] = anchor
            for h in cyc:
                face_of[h] = lab
        if any(x is None for x in hit):
            raise MalformedRotation("some face has no label")
        if outer not in faces:
            raise MalformedRotation(f"outer label {outer} is not a face label")
        self.faces = faces
        self.face_of = face_of
        self.outer = outer
        self.anchors = anchors

    # -- local structure ----------------------------------------------------
    def other(self, e, v):
        b, w = self.edges[e]
        return w if v == b else b

    def tail(self, h):
        b, w = self.edges[h >> 1]
        return b if h % 2 == 0 else w

    def head(self, h):
        b, w = self.edges[h >> 1]
        return w if h % 2 == 0 else b

    def out_half(self, v, e) -> int:
        return 2 * e if self.colors[v] == BLACK else 2 * e + 1

    def next_half(self, h) -> int:
        v = self.head(h)
        r = self.rot[v]
        i = r.index(h >> 1)
        return self.out_half(v, r[i - 1])

    def degree(self, v) -> int:
        return len(self.rot[v])

    @property
    def vertices(self):
        return sorted(self.colors, key=_label_key)

    def black_vertices(self):
        return [v for v in self.vertices if self.colors[v] == BLACK]

    def white_vertices(self):
        return [v for v in self.vertices if self.colors[v] == WHITE]

    @property
    def edge_ids(self):
        return sorted(self.edges)

    @property
    def inner_faces(self):
        return tuple(sorted((f for f in self.faces if f != self.outer), key=_label_key))

    def face_length(self, f) -> int:
        return len(self.faces[f])

    def face_edges(self, f):
        return [h >> 1 for h in self.faces[f]]

    def face_vertices(self, f):
        return [self.tail(h) for h in self.faces[f]]

    def left_face(self, h):
        return self.face_of[h]

    def right_face(self, h):
        return self.face_of[h ^ 1]

    def faces_of_edge(self, e):
        """(face left of b->w, face left of w->b)."""
        return self.face_of[2 * e], self.face_of[2 * e + 1]

    def is_single_edge(self) -> bool:
        return len(self.edges) == 1 and len(self.colors) == 2

    def summary(self) -> dict:
        return {"vertices": len(self.colors), "edges": len(self.edges),
                "faces": len(self.faces), "inner_faces": list(self.inner_faces)}

    def __repr__(self):
        return (f"PlaneBipartiteGraph(V={len(self.colors)}, E={len(self.edges)}, "
                f"faces={list(self.inner_faces)}, outer={self.outer})")

    def relabel_faces(self, mapping) -> "PlaneBipartiteGraph":
        labels = {mapping.get(f, f): a for f, a in self.anchors.items()}
        return PlaneBipartiteGraph(self.colors, self.edges, self.rot, labels,
                                   mapping.get(self.outer, self.outer), check=False)

    def with_outer(self, f) -> "PlaneBipartiteGraph":
        """Same map, reprojected so that face ``f`` is the infinite one."""
        return PlaneBipartiteGraph(self.colors, self.edges, self.rot, self.anchors, f, check=False)

    def square_vertices_distinct(self, f) -> bool:
        vs = self.face_vertices(f)
        return len(set(vs)) == len(vs)

    # -- io -----------------------------------------------------------------
    def to_json(self) -> dict:
        out = {"vertices": [{"id": v, "color": self.colors[v]} for v in self.vertices],
               "edges": [[2 * e, 2 * e + 1, b, w] for e, (b, w) in sorted(self.edges.items())],
               "rotations": {str(v): [self.out_half(v, e) for e in self.rot[v]] for v in self.vertices},
               "faces": {str(f): self.anchors[f] for f in sorted(self.faces, key=_label_key)},
               "outer": self.anchors[self.outer]}
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    def to_dot(self, name="G") -> str:
        lines = [f"graph {name} {{"]
        for v in self.vertices:
            fill = "black" if self.colors[v] == BLACK else "white"
            font = "white" if fill == "black" else "black"
            lines.append(f'  "{v}" [style=filled, fillcolor={fill}, fontcolor={font}];')
        for e, (b, w) in sorted(self.edges.items()):
            lines.append(f'  "{b}" -- "{w}" [label="{e}"];')
        lines.append("}")
        return "\n".join(lines)


def _label_key(f):
    return (0, f, "") if isinstance(f, int) else (1, 0, repr(f))


# ---------------------------------------------------------------------------
# construction helpers

def build_graph(edges, rotations, outer_hint=None, face_labels=None, colors=None,
                outer=None) -> PlaneBipartiteGraph:
    """Build a graph from (black, white) pairs; edge ids are list positions.

    ``rotations`` maps each vertex to the counterclockwise list of its edge
    ids.  ``outer_hint`` is a half-edge on the outer face boundary.
    ``face_labels`` optionally maps labels to anchor half-edges, in which
    case ``outer`` names the outer label.
    """
    cols = {}
    emap = {}
    for e, (b, w) in enumerate(edges):
        for v, c in ((b, BLACK), (w, WHITE)):
            if cols.setdefault(v, c) != c:
                raise NotBipartite(f"vertex {v} is used as both black and white (edge {e})")
        emap[e] = (b, w)
    if colors:
        for v, c in colors.items():
            c = _color(c)
            if cols.setdefault(v, c) != c:
                raise NotBipartite(f"vertex {v} is coloured {c} but used as {cols[v]}")
    rot = {v: list(rotations.get(v, rotations.get(str(v), []))) for v in cols}
    return PlaneBipartiteGraph(cols, emap, rot, face_labels, outer, outer_hint)


def _color(c):
    c = str(c).lower()
    if c in ("b", "black"):
        return BLACK
    if c in ("w", "white"):
        return WHITE
    raise NotBipartite(f"unknown colour {c!r}")


def from_json(obj) -> PlaneBipartiteGraph:
    """Read the line-oriented JSON graph format (see README)."""
    if isinstance(obj, str):
        obj = json.loads(obj)
    colors = {}
    for rec in obj["vertices"]:
        colors[rec["id"]] = _color(rec["color"])
    half_to = {}
    edges = {}
    for k, (he, tw, b, w) in enumerate(obj["edges"]):
        edges[k] = (b, w)
        half_to[he] = 2 * k
        half_to[tw] = 2 * k + 1
    for e, (b, w) in edges.items():
        if colors.get(b) != BLACK or colors.get(w) != WHITE:
            raise NotBipartite(f"edge {e} does not join black {b} to white {w}")
    rot = {}
    for v in colors:
        hs = obj["rotations"].get(str(v), obj["rotations"].get(v))
        if hs is None:
            raise MalformedRotation(f"no rotation given for vertex {v}")
        try:
            rot[v] = [half_to[h] >> 1 for h in hs]
        except KeyError as exc:
            raise MalformedRotation(f"rotation at vertex {v} names unknown half-edge {exc}") from None
    labels = None
    outer = None
    hint = obj.get("outer")
    if hint is not None:
        hint = half_to[hint]
    if obj.get("faces"):
        labels = {}
        for k, a in obj["faces"].items():
            lab = int(k) if str(k).lstrip("-").isdigit() else k
            labels[lab] = half_to[a]
        if hint is not None:
            for lab, a in labels.items():
                if a == hint:
                    outer = lab
        if outer is None:
            outer = 0
        hint = None
    return PlaneBipartiteGraph(colors, edges, rot, labels, outer, hint)


def load_graph(path) -> PlaneBipartiteGraph:
    with open(path) as fh:
        return from_json(json.load(fh))


# ---------------------------------------------------------------------------
# edge classification and property (*)

def classify_edge(G: PlaneBipartiteGraph, f, e, clockwise: bool = True) -> str:
    """'BlackWhite' or 'WhiteBlack' for edge ``e`` on inner face ``f``.

    With ``clockwise=False`` the face is walked the other way round, which
    swaps the answer.
    """
    if f == G.outer:
        raise EdgeNotOnFace(f"face {f} is the outer face")
    bnd = G.faces[f]
    fwd = (2 * e + 1) in bnd    # ccw walk goes white -> black
    bwd = (2 * e) in bnd
    if not (fwd or bwd):
        raise EdgeNotOnFace(f"edge {e} is not on face {f}")
    if fwd and bwd:
        raise EdgeNotOnFace(f"edge {e} has face {f} on both sides")
    bw = fwd
    if not clockwise:
        bw = not bw
    return "BlackWhite" if bw else "WhiteBlack"


def face_edge_classes(G: PlaneBipartiteGraph, f):
    """(BlackWhite edges, WhiteBlack edges) of inner face f."""
    bw, wb = [], []
    for h in G.faces[f]:
        (bw if h % 2 == 1 else wb).append(h >> 1)
    return bw, wb


def _nx_bipartite(G, skip_vertices=(), skip_edges=()):
    H = nx.Graph()
    emap = {}
    for v in G.colors:
        if v not in skip_vertices:
            H.add_node(("v", v))
    for e, (b, w) in G.edges.items():
        if e in skip_edges or b in skip_vertices or w in skip_vertices:
            continue
        H.add_edge(("v", b), ("v", w))
        emap.setdefault((b, w), e)
    return H, emap


def perfect_matching_containing(G: PlaneBipartiteGraph, e=None):
    """Some perfect matching (as a frozenset of edges) containing ``e``, or None."""
    skip = ()
    base = []
    if e is not None:
        b, w = G.edges[e]
        skip = (b, w)
        base = [e]
    H, emap = _nx_bipartite(G, skip)
    left = [n for n in H.nodes if G.colors[n[1]] == BLACK]
    if H.number_of_nodes() == 0:
        return frozenset(base)
    if 2 * len(left) != H.number_of_nodes():
        return None
    m = nx.bipartite.hopcroft_karp_matching(H, top_nodes=left)
    if len(m) != H.number_of_nodes():
        return None
    out = list(base)
    for n in left:
        out.append(emap[(n[1], m[n][1])])
    return frozenset(out)


def check_property_star(G: PlaneBipartiteGraph, cross_check: bool = True,
                        max_cross_check_edges: int = 40) -> Certificate:
    """Connected, bipartite, and every edge in some perfect matching.

    Construction already enforces connectivity and the colouring, so the
    work is one matching search per edge.  When the property holds and the
    graph is small, also confirm that every inner face admits an up-flip in
    some perfect matching.
    """
    cover = {}
    for e in G.edge_ids:
        m = perfect_matching_containing(G, e)
        if m is None:
            return Certificate(False, e, {"reason": f"edge {e} lies in no perfect matching"})
        cover[e] = m
    details = {}
    if cross_check and len(G.edges) <= max_cross_check_edges:
        from .dimer import enumerate_matchings, can_flip
        ms = enumerate_matchings(G)
        for f in G.inner_faces:
            if not any(can_flip(G, M, f, "up") for M in ms):
                raise AssertionError(f"face {f} admits no up-flip in a graph with property (*)")
        details["all_faces_flip"] = True
    return Certificate(True, cover, details)


# ---------------------------------------------------------------------------
# moves

@dataclass(frozen=True)
class MoveRecord:
    kind: str                      # E-contract, E-uncontract, S, B, B-inverse
    face: object = None
    data: dict = field(default_factory=dict, hash=False, compare=True)

    def to_json(self):
        return {"kind": self.kind, "face": self.face, "data": {k: (list(v) if isinstance(v, tuple) else v)
                                                               for k, v in self.data.items()}}


def _fresh(ids):
    return (max(ids) + 1) if ids else 0


def _walk_to_survivor(G, h, dead):
    x = h
    for _ in range(4 * len(G.edges) + 4):
        if (x >> 1) not in dead:
            return x
        x = G.next_half(x)
    raise PatternMismatch("face disappeared during a move")


def _reanchor(G, dead_edges, drop=()):
    labels = {}
    for f, a in G.anchors.items():
        if f in drop:
            continue
        labels[f] = _walk_to_survivor(G, a, dead_edges)
    return labels


def e_contract(G: PlaneBipartiteGraph, v, check=True, keep=None):
    """Contract the degree-2 vertex ``v``; returns (graph, record).

    The two neighbours of ``v`` merge; ``keep`` picks which id survives.
    """
    if G.degree(v) != 2:
        raise DegreeViolation(f"vertex {v} has degree {G.degree(v)}, contraction needs 2")
    e1, e2 = G.rot[v]
    a1, a2 = G.other(e1, v), G.other(e2, v)
    if keep is not None and keep == a2:
        e1, e2, a1, a2 = e2, e1, a2, a1
    if a1 == a2:
        raise PatternMismatch(f"both edges at vertex {v} go to vertex {a1}")
    if check and (G.degree(a1) < 2 or G.degree(a2) < 2):
        raise DegreeViolation(f"neighbours of {v} must have degree at least 2")
    labels = _reanchor(G, {e1, e2})
    r1 = list(G.rot[a1])
    i = r1.index(e1)
    xs = r1[i + 1:] + r1[:i]
    r2 = list(G.rot[a2])
    j = r2.index(e2)
    ys = r2[j + 1:] + r2[:j]
    colors = {u: c for u, c in G.colors.items() if u not in (v, a2)}
    rot = {u: r for u, r in G.rot.items() if u not in (v, a2)}
    rot[a1] = tuple(xs + ys)
    edges = {}
    for e, (b, w) in G.edges.items():
        if e in (e1, e2):
            continue
        b = a1 if b == a2 else b
        w = a1 if w == a2 else w
        edges[e] = (b, w)
    H = PlaneBipartiteGraph(colors, edges, rot, labels, G.outer, check=check)
    rec = MoveRecord("E-contract", None, {"vertex": v, "merged_into": a1, "removed": a2,
                                          "edges": (e1, e2), "arc": tuple(ys)})
    return H, rec


def e_uncontract(G: PlaneBipartiteGraph, v, arc, new_vertex=None, mid_vertex=None,
                 new_edges=None, check=True):
    """Split ``v`` along a path v - u - v2; ``arc`` is the contiguous run of
    edges (in rotation order) handed to the new vertex v2."""
    r = list(G.rot[v])
    arc = list(arc)
    k = len(arc)
    if k == 0 or k >= len(r):
        raise PatternMismatch("uncontraction needs two nonempty arcs")
    try:
        s = r.index(arc[0])
    except ValueError:
        raise PatternMismatch(f"edge {arc[0]} is not at vertex {v}") from None
    rr = r[s:] + r[:s]
    if rr[:k] != arc:
        raise PatternMismatch(f"edges {arc} are not a contiguous arc at vertex {v}")
    keep = rr[k:]
    ids = list(G.colors)
    v2 = new_vertex if new_vertex is not None else _fresh([x for x in ids if isinstance(x, int)])
    u = mid_vertex if mid_vertex is not None else _fresh([x for x in ids if isinstance(x, int)] + [v2])
    if new_edges is None:
        e1 = _fresh(list(G.edges))
        e2 = e1 + 1
    else:
        e1, e2 = new_edges
    c = G.colors[v]
    oc = WHITE if c == BLACK else BLACK
    colors = dict(G.colors)
    colors[v2] = c
    colors[u] = oc
    edges = {}
    for e, (b, w) in G.edges.items():
        if e in arc:
            b = v2 if b == v else b
            w = v2 if w == v else w
        edges[e] = (b, w)
    edges[e1] = (v, u) if c == BLACK else (u, v)
    edges[e2] = (v2, u) if c == BLACK else (u, v2)
    rot = dict(G.rot)
    rot[v] = tuple(keep + [e1])
    rot[v2] = tuple(arc + [e2])
    rot[u] = (e1, e2)
    H = PlaneBipartiteGraph(colors, edges, rot, dict(G.anchors), G.outer, check=check)
    rec = MoveRecord("E-uncontract", None, {"vertex": v, "arc": tuple(arc), "new_vertex": v2,
                                            "mid_vertex": u, "edges": (e1, e2)})
    return H, rec


def square_move(G: PlaneBipartiteGraph, f, check=True):
    """Urban renewal at the inner square ``f``."""
    if f == G.outer:
        raise PatternMismatch("square move at the outer face")
    bnd = G.faces[f]
    if len(bnd) != 4:
        raise PatternMismatch(f"face {f} has {len(bnd)} sides, not 4")
    vs = [G.tail(h) for h in bnd]
    if len(set(vs)) != 4:
        raise PatternMismatch(f"face {f} is not bounded by four distinct vertices")
    s = [h >> 1 for h in bnd]
    if len(set(s)) != 4:
        raise PatternMismatch(f"face {f} repeats an edge")
    for v in vs:
        if G.degree(v) < 3:
            raise DegreeViolation(f"vertex {v} on face {f} has degree {G.degree(v)}")
    labels = _reanchor(G, set(s), drop=(f,))
    ints = [x for x in G.colors if isinstance(x, int)]
    base = _fresh(ints)
    us = [base + i for i in range(4)]
    eb = _fresh(list(G.edges))
    t = [eb + i for i in range(4)]
    sp = [eb + 4 + i for i in range(4)]
    colors = dict(G.colors)
    edges = {e: bw for e, bw in G.edges.items() if e not in s}
    rot = dict(G.rot)
    for i, v in enumerate(vs):
        oc = WHITE if G.colors[v] == BLACK else BLACK
        colors[us[i]] = oc
        edges[t[i]] = (v, us[i]) if G.colors[v] == BLACK else (us[i], v)
        r = list(G.rot[v])
        # s_i is the ccw predecessor of s_{i-1} at v_i; replace the pair by t_i
        j = r.index(s[i])
        r = r[j:] + r[:j]
        if r[1] != s[i - 1]:
            raise PatternMismatch(f"unexpected rotation at vertex {v}")
        rot[v] = tuple([t[i]] + r[2:])
    for i in range(4):
        a, c = us[i], us[(i + 1) % 4]
        edges[sp[i]] = (a, c) if colors[a] == BLACK else (c, a)
    for i in range(4):
        rot[us[i]] = (sp[i], sp[i - 1], t[i])
    colors_u0 = colors[us[0]]
    labels[f] = 2 * sp[0] if colors_u0 == BLACK else 2 * sp[0] + 1
    H = PlaneBipartiteGraph(colors, edges, rot, labels, G.outer, check=check)
    rec = MoveRecord("S", f, {"vertices": tuple(vs), "new_vertices": tuple(us),
                              "removed": tuple(s), "spokes": tuple(t), "square": tuple(sp)})
    return H, rec


def _bigon_halves(G, f):
    bnd = G.faces[f]
    if len(bnd) != 2:
        raise PatternMismatch(f"face {f} is not a bigon")
    h1, h2 = bnd
    if h1 % 2 == 1:
        h1, h2 = h2, h1
    # h1 is b->w along e1, h2 is w->b along e2; the bigon is {2 e1, 2 e2 + 1}
    return h1, h2


def bigon_removal(G: PlaneBipartiteGraph, f, check=True):
    if f == G.outer:
        raise PatternMismatch("bigon removal at the outer face")
    h1, h2 = _bigon_halves(G, f)
    e1, e2 = h1 >> 1, h2 >> 1
    b, w = G.edges[e1]
    if check and (G.degree(b) < 2 or G.degree(w) < 2):
        raise DegreeViolation("bigon vertices must have degree at least 2")
    labels = {}
    for lab, a in G.anchors.items():
        if lab == f:
            continue
        labels[lab] = h1 if a in (h2, h2 ^ 1) else a
    edges = {e: bw for e, bw in G.edges.items() if e != e2}
    rot = dict(G.rot)
    rot[b] = tuple(x for x in G.rot[b] if x != e2)
    rot[w] = tuple(x for x in G.rot[w] if x != e2)
    H = PlaneBipartiteGraph(G.colors, edges, rot, labels, G.outer, check=check)
    rec = MoveRecord("B", f, {"kept": e1, "removed": e2})
    return H, rec


def bigon_insert(G: PlaneBipartiteGraph, e, f, new_edge=None, check=True):
    """Double edge ``e``; the new bigon gets label ``f``."""
    if f in G.faces:
        raise PatternMismatch(f"face label {f} already in use")
    b, w = G.edges[e]
    e2 = new_edge if new_edge is not None else _fresh(list(G.edges))
    edges = dict(G.edges)
    edges[e2] = (b, w)
    rb = list(G.rot[b])
    rb.insert(rb.index(e) + 1, e2)
    rw = list(G.rot[w])
    rw.insert(rw.index(e), e2)
    rot = dict(G.rot)
    rot[b] = tuple(rb)
    rot[w] = tuple(rw)
    labels = {}
    for lab, a in G.anchors.items():
        labels[lab] = 2 * e2 if a == 2 * e else a
    labels[f] = 2 * e
    H = PlaneBipartiteGraph(G.colors, edges, rot, labels, G.outer, check=check)
    rec = MoveRecord("B-inverse", f, {"edge": e, "new_edge": e2})
    return H, rec


def apply_move(G: PlaneBipartiteGraph, m: MoveRecord, debug: bool = False) -> PlaneBipartiteGraph:
    if m.kind == "E-contract":
        H, _ = e_contract(G, m.data["vertex"], keep=m.data.get("keep"))
    elif m.kind == "E-uncontract":
        d = m.data
        H, _ = e_uncontract(G, d["vertex"], d["arc"], d.get("new_vertex"), d.get("mid_vertex"),
                            d.get("edges"))
    elif m.kind == "S":
        H, _ = square_move(G, m.face)
    elif m.kind == "B":
        H, _ = bigon_removal(G, m.face)
    elif m.kind == "B-inverse":
        H, _ = bigon_insert(G, m.data["edge"], m.face, m.data.get("new_edge"))
    else:
        raise PatternMismatch(f"unknown move kind {m.kind!r}")
    if debug:
        assert check_property_star(H, cross_check=False).holds
    return H


def inverse_moves(m: MoveRecord) -> list:
    """Records undoing ``m`` (a square move is undone by itself plus contractions)."""
    d = m.data
    if m.kind == "E-contract":
        return [MoveRecord("E-uncontract", None, {"vertex": d["merged_into"], "arc": d["arc"],
                                                  "new_vertex": d["removed"], "mid_vertex": d["vertex"],
                                                  "edges": d["edges"]})]
    if m.kind == "E-uncontract":
        return [MoveRecord("E-contract", None, {"vertex": d["mid_vertex"], "keep": d["vertex"]})]
    if m.kind == "B":
        return [MoveRecord("B-inverse", m.face, {"edge": d["kept"], "new_edge": d["removed"]})]
    if m.kind == "B-inverse":
        return [MoveRecord("B", m.face, {})]
    if m.kind == "S":
        return [MoveRecord("S", m.face, {})] + [MoveRecord("E-contract", None, {"vertex": u, "keep": v})
                                                 for u, v in zip(d["new_vertices"], d["vertices"])]
    raise PatternMismatch(f"unknown move kind {m.kind!r}")


def undo_square(G_after: PlaneBipartiteGraph, f):
    """Square move at f followed by contraction of the four spoke midpoints."""
    H, rec = square_move(G_after, f)
    for v in rec.data["vertices"]:
        H, _ = e_contract(H, v)
    return H


# ---------------------------------------------------------------------------
# reduction sequences

@dataclass
class ReductionSequence:
    faces: list
    fullTrace: list

    def to_json(self):
        return {"faces": list(self.faces), "trace": [m.to_json() for m in self.fullTrace]}


def contract_all(G: PlaneBipartiteGraph, trace=None):
    """Contract degree-2 vertices until none can be contracted."""
    while True:
        for v in G.vertices:
            if G.degree(v) == 2:
                e1, e2 = G.rot[v]
                if G.other(e1, v) != G.other(e2, v):
                    G, rec = e_contract(G, v, check=False)
                    if trace is not None:
                        trace.append(rec)
                    break
        else:
            return G


def _squares(G):
    out = []
    outer_adj = set()
    for h in G.faces[G.outer]:
        outer_adj.add(G.face_of[h ^ 1])
    for f in G.inner_faces:
        if G.face_length(f) == 4 and G.square_vertices_distinct(f) and \
                all(G.degree(v) >= 3 for v in G.face_vertices(f)):
            out.append(f)
    out.sort(key=lambda f: (f not in outer_adj, _label_key(f)))
    return out


def _bigons(G):
    return [f for f in G.inner_faces if G.face_length(f) == 2]


def _s_search(G, depth_cap):
    """Shortest run of square moves (with contractions) reaching a bigon."""
    for depth in range(1, depth_cap + 1):
        seen = {}
        path = []

        def dfs(H, d):
            for f in _squares(H):
                if path and path[-1] == f:
                    continue  # a square move undoes itself
                K, _ = square_move(H, f, check=False)
                K = contract_all(K)
                key = canonical_form(K, labels=False)
                if seen.get(key, -1) >= d - 1:
                    continue
                seen[key] = d - 1
                path.append(f)
                if _bigons(K):
                    return True
                if d > 1 and dfs(K, d - 1):
                    return True
                path.pop()
            return False

        if dfs(G, depth):
            return list(path)
    return None


def find_reduction_sequence(G: PlaneBipartiteGraph, depth_cap: int = 12,
                            verify: bool = True) -> ReductionSequence:
    trace = []
    faces = []
    H = contract_all(G, trace)
    while not H.is_single_edge():
        bg = _bigons(H)
        if bg:
            f = bg[0]
            H, rec = bigon_removal(H, f, check=False)
            trace.append(rec)
            faces.append(f)
            H = contract_all(H, trace)
            continue
        seq = _s_search(H, depth_cap)
        if seq is None:
            raise SearchExhausted(f"no square-move sequence of length <= {depth_cap} creates a bigon")
        for f in seq:
            H, rec = square_move(H, f, check=False)
            trace.append(rec)
            faces.append(f)
            H = contract_all(H, trace)
    rs = ReductionSequence(faces, trace)
    if verify:
        replay(G, rs.fullTrace)
    return rs


def replay(G: PlaneBipartiteGraph, trace: Iterable[MoveRecord], check_star: bool = False):
    """Apply a full trace; asserts the end is a single edge.  Returns the
    list of intermediate graphs (first is G)."""
    graphs = [G]
    H = G
    for m in trace:
        H = apply_move(H, m)
        if check_star:
            assert check_property_star(H, cross_check=False).holds, m
        graphs.append(H)
    if not H.is_single_edge():
        raise PatternMismatch("trace does not end at a single edge")
    return graphs


def replay_faces(G: PlaneBipartiteGraph, faces) -> ReductionSequence:
    """Replay an externally supplied face sequence, inserting contractions.

    Each face is treated as (B) if it is a bigon at that point and as (S) if
    it is a square.
    """
    trace = []
    H = contract_all(G, trace)
    for f in faces:
        if f not in H.faces or f == H.outer:
            raise PatternMismatch(f"face {f} does not exist at this point")
        n = H.face_length(f)
        if n == 2:
            H, rec = bigon_removal(H, f)
        elif n == 4:
            H, rec = square_move(H, f)
        else:
            raise PatternMismatch(f"face {f} has {n} sides when it is due to be moved")
        trace.append(rec)
        H = contract_all(H, trace)
    if not H.is_single_edge():
        raise PatternMismatch("face sequence does not reduce the graph to a single edge")
    return ReductionSequence(list(faces), trace)


# ---------------------------------------------------------------------------
# quivers

def _net_arrows(G, include_outer):
    labels = list(G.inner_faces)
    if include_outer:
        labels = labels + [G.outer]
    idx = {f: i for i, f in enumerate(labels)}
    n = len(labels)
    b = [[0] * n for _ in range(n)]
    for e in G.edge_ids:
        bw_left, wb_left = G.faces_of_edge(e)
        if bw_left == wb_left:
            continue
        if bw_left not in idx or wb_left not in idx:
            continue
        # arrow with the white endpoint on its right runs from the face left
        # of w->b to the face left of b->w
        i, j = idx[wb_left], idx[bw_left]
        b[i][j] += 1
        b[j][i] -= 1
    return labels, b


def dual_quiver(G: PlaneBipartiteGraph, debug: bool = False) -> Quiver:
    """Q_G on the inner faces, oriented 2-cycles cancelled.

    With ``debug``, also assert that no quadrilateral face borders another
    face twice with opposite arrows, so cancellation never hides a square.
    """
    labels, b = _net_arrows(G, False)
    if debug:
        pairs = {(a, c) for a, c, _ in raw_arrows(G)}
        for f in G.inner_faces:
            if G.face_length(f) == 4:
                bad = [g for g in G.inner_faces if (f, g) in pairs and (g, f) in pairs]
                assert not bad, f"quadrilateral face {f} forms a 2-cycle with {bad}"
    return Quiver(labels, b)


def extended_dual_quiver(G: PlaneBipartiteGraph) -> Quiver:
    labels, b = _net_arrows(G, True)
    return Quiver(labels, b)


def raw_arrows(G: PlaneBipartiteGraph, include_outer=False):
    """Uncancelled arrows as a list of (source face, target face, edge)."""
    out = []
    for e in G.edge_ids:
        bw_left, wb_left = G.faces_of_edge(e)
        if bw_left == wb_left:
            continue
        if not include_outer and G.outer in (bw_left, wb_left):
            continue
        out.append((wb_left, bw_left, e))
    return out


# ---------------------------------------------------------------------------
# canonical form

def _encode(G, h0, labels, with_order=False):
    v0 = G.tail(h0)
    vidx = {v0: 0}
    start = {v0: h0 >> 1}
    eidx = {}
    order = []
    q = deque([v0])
    code = []
    while q:
        v = q.popleft()
        r = G.rot[v]
        i = r.index(start[v])
        row = [0 if G.colors[v] == BLACK else 1]
        for e in r[i:] + r[:i]:
            if e not in eidx:
                eidx[e] = len(eidx)
                order.append(e)
            row.append(eidx[e])
            u = G.other(e, v)
            if u not in vidx:
                vidx[u] = len(vidx)
                start[u] = e
                q.append(u)
        code.append(tuple(row))
    out = [tuple(code)]
    if labels:
        out.append(tuple((repr(G.face_of[2 * e]), repr(G.face_of[2 * e + 1])) for e in order))
        out.append(repr(G.outer))
    else:
        out.append(tuple((G.face_of[2 * e] == G.outer, G.face_of[2 * e + 1] == G.outer) for e in order))
    if with_order:
        return tuple(out), order
    return tuple(out)


def canonical_form(G: PlaneBipartiteGraph, labels: bool = True):
    """Minimum rotation encoding over all starting half-edges."""
    if not G.edges:
        return (("single vertex", G.colors[next(iter(G.colors))]),)
    return min(_encode(G, h, labels) for e in G.edges for h in (2 * e, 2 * e + 1))


def isomorphic(G: PlaneBipartiteGraph, H: PlaneBipartiteGraph, labels: bool = True) -> bool:
    return canonical_form(G, labels) == canonical_form(H, labels)


def plane_isomorphisms(G: PlaneBipartiteGraph, H: PlaneBipartiteGraph):
    """All colour- and orientation-preserving isomorphisms G -> H fixing the outer face.

    Each is returned as a pair (edge map, face map).
    """
    if len(G.edges) != len(H.edges) or len(G.colors) != len(H.colors):
        return []
    h0 = min(2 * e for e in G.edges)
    code, order = _encode(G, h0, False, with_order=True)
    out = []
    for e in H.edges:
        for h in (2 * e, 2 * e + 1):
            c2, order2 = _encode(H, h, False, with_order=True)
            if c2 != code:
                continue
            emap = dict(zip(order, order2))
            fmap = {}
            for a, b in emap.items():
                fmap[G.face_of[2 * a]] = H.face_of[2 * b]
                fmap[G.face_of[2 * a + 1]] = H.face_of[2 * b + 1]
            out.append((emap, fmap))
    return out


def from_drawing(pos, edges, outer_label=0) -> PlaneBipartiteGraph:
    """Plane graph from a straight-line drawing.

    ``pos`` maps vertex -> (x, y, colour) and ``edges`` maps edge id ->
    (black, white).  Rotations come from edge angles; the face with
    negative signed area is the outer one.  Inner faces are labelled by
    the anchor returned from ``PlaneBipartiteGraph`` defaults.
    """
    import math
    colors = {v: _color(c) for v, (_, _, c) in pos.items()}
    rot = {}
    for v in pos:
        inc = [e for e, bw in edges.items() if v in bw]
        x, y = pos[v][0], pos[v][1]

        def ang(e, v=v, x=x, y=y):
            u = edges[e][1] if edges[e][0] == v else edges[e][0]
            return math.atan2(pos[u][1] - y, pos[u][0] - x)
        rot[v] = tuple(sorted(inc, key=ang))
    G = PlaneBipartiteGraph(colors, edges, rot)

    def area(f):
        tot = 0.0
        for h in G.faces[f]:
            a, b = pos[G.tail(h)], pos[G.head(h)]
            tot += a[0] * b[1] - a[1] * b[0]
        return tot
    neg = [f for f in G.faces if area(f) < 0]
    if len(neg) != 1:
        raise MalformedRotation("drawing does not have a unique outer face")
    if neg[0] != G.outer:
        G = G.with_outer(neg[0])
        inner = sorted((f for f in G.faces if f != G.outer), key=lambda f: min(G.faces[f]))
        mapping = {f: k + 1 for k, f in enumerate(inner)}
        mapping[G.outer] = outer_label
        G = G.relabel_faces(mapping)
    return G


# ---------------------------------------------------------------------------
# small standard graphs

def single_edge() -> PlaneBipartiteGraph:
    return build_graph([(0, 1)], {0: [0], 1: [0]})


def bigon() -> PlaneBipartiteGraph:
    # edge 1 sits ccw after edge 0 at the black vertex
    return build_graph([(0, 1), (0, 1)], {0: [0, 1], 1: [1, 0]}, face_labels={1: 0, 0: 1}, outer=0)


def cycle_graph(n: int) -> PlaneBipartiteGraph:
    """Plane 2n-cycle alternating black/white, inner face labelled 1."""
    verts = list(range(2 * n))
    edges = []
    for i in range(2 * n):
        a, c = verts[i], verts[(i + 1) % (2 * n)]
        edges.append((a, c) if i % 2 == 0 else (c, a))
    rot = {}
    for i in range(2 * n):
        # vertex i sits between edge i-1 and edge i; with the ring drawn ccw
        # the inner face is on the left of i -> i+1
        rot[i] = [(i - 1) % (2 * n), i]
    G = build_graph(edges, rot)
    # relabel: inner face 1, outer 0
    inner = [f for f in G.faces if f != G.outer][0]
    return G.relabel_faces({inner: 1, G.outer: 0}) if inner != 1 else G


# ---------------------------------------------------------------------------
# subgraphs

def subgraph_components(G: PlaneBipartiteGraph, keep_vertices, keep_edges):
    """Connected components of the plane subgraph on the given vertices/edges.

    Inner faces that coincide with faces of ``G`` keep their labels; a face
    made by merging several faces of ``G`` gets a label of the form
    ``"m<a>_<b>..."``.  The outer face of each component is the one that
    contains the outer face of ``G``.
    """
    keep_vertices = set(keep_vertices)
    edges = {e: G.edges[e] for e in keep_edges
             if G.edges[e][0] in keep_vertices and G.edges[e][1] in keep_vertices}
    adj = {v: [] for v in keep_vertices}
    for e, (b, w) in edges.items():
        adj[b].append(w)
        adj[w].append(b)
    seen = set()
    comps = []
    for v0 in sorted(keep_vertices, key=_label_key):
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
        comps.append(comp)
    out = []
    for comp in comps:
        cedges = {e: bw for e, bw in edges.items() if bw[0] in comp}
        if not cedges:
            continue
        rot = {v: tuple(e for e in G.rot[v] if e in cedges) for v in comp}
        colors = {v: G.colors[v] for v in comp}
        tmp = PlaneBipartiteGraph(colors, cedges, rot)
        labels = {}
        outer = None
        gfaces = {frozenset(b): f for f, b in G.faces.items()}
        for f, bnd in tmp.faces.items():
            key = frozenset(bnd)
            region = set()
            stack = [G.face_of[h] for h in bnd]
            region.update(stack)
            while stack:
                g = stack.pop()
                for h in G.faces[g]:
                    if (h >> 1) in cedges:
                        continue
                    k = G.face_of[h ^ 1]
                    if k not in region:
                        region.add(k)
                        stack.append(k)
            if key in gfaces:
                lab = gfaces[key]
            elif G.outer in region:
                lab = G.outer
            else:
                lab = "m" + "_".join(str(x) for x in sorted(region, key=_label_key))
            if G.outer in region:
                if outer is not None:
                    raise PatternMismatch("two faces of a component contain the outer face")
                outer = lab
            labels[lab] = bnd[0]
        out.append(PlaneBipartiteGraph(colors, cedges, rot, labels, outer, check=False))
    return out
