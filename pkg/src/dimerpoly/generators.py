"""Random graphs with property (*), grown by inverse moves from a single edge.

Growing by inverse (B), (S) and (E) moves keeps property (*), and reading
the growth backwards gives a reduction sequence for free.
"""
from __future__ import annotations

import random

from .graph_core import (PlaneBipartiteGraph, ReductionSequence, bigon_insert,
                         contract_all, e_uncontract, inverse_moves, single_edge, square_move)


def _next_label(G):
    labs = [f for f in G.faces if isinstance(f, int)]
    return max(labs) + 1 if labs else 1


def _square_candidates(G):
    out = []
    for f in G.inner_faces:
        if G.face_length(f) == 4 and G.square_vertices_distinct(f) and \
                len(set(G.face_edges(f))) == 4 and all(G.degree(v) >= 3 for v in G.face_vertices(f)):
            out.append(f)
    return out


def random_uncontract(G: PlaneBipartiteGraph, rng: random.Random, v=None):
    cands = [u for u in G.vertices if G.degree(u) >= 3] if v is None else [v]
    if not cands:
        return None
    v = rng.choice(cands)
    r = list(G.rot[v])
    d = len(r)
    k = rng.randint(1, d - 1)
    s = rng.randrange(d)
    arc = [r[(s + i) % d] for i in range(k)]
    return e_uncontract(G, v, arc)


def grow_face(G: PlaneBipartiteGraph, f, rng: random.Random):
    """Uncontract a vertex of face f so that f gains two sides."""
    bnd = G.faces[f]
    i = rng.randrange(len(bnd))
    h = bnd[i]
    v = G.head(h)
    nxt = bnd[(i + 1) % len(bnd)]
    r = list(G.rot[v])
    # corner of f at v lies between edge(nxt) and edge(h) in ccw order
    a = r.index(nxt >> 1)
    d = len(r)
    if d < 2:
        return None
    # any arc ending with edge(nxt) and not containing edge(h)
    b = r.index(h >> 1)
    span = (a - b) % d        # number of edges strictly after h up to nxt, inclusive of nxt
    if span < 1 or span > d - 1:
        return None
    k = rng.randint(1, span)
    arc = [r[(a - k + 1 + j) % d] for j in range(k)]
    return e_uncontract(G, v, arc)


def make_square(G: PlaneBipartiteGraph, f, rng: random.Random, history: list):
    """Grow face f into a square whose corners have degree >= 3.

    Low-degree corners get an extra edge by doubling one of their square
    edges, which adds new bigon faces.  Returns the new graph or None.
    """
    while G.face_length(f) < 4:
        res = grow_face(G, f, rng)
        if not res:
            return None
        G, rec = res
        history.append(rec)
    if G.face_length(f) != 4 or not G.square_vertices_distinct(f):
        return None
    for _ in range(8):
        low = [v for v in G.face_vertices(f) if G.degree(v) < 3]
        if not low:
            return G
        v = low[0]
        e = rng.choice([x for x in G.face_edges(f) if v in G.edges[x]])
        G, rec = bigon_insert(G, e, _next_label(G))
        history.append(rec)
    return None


def _record_path(records):
    """Reverse a growth history into a reduction trace and face sequence."""
    trace = []
    for rec in reversed(records):
        trace.extend(inverse_moves(rec))
    faces = [m.face for m in trace if m.kind in ("S", "B")]
    return ReductionSequence(faces, trace)


def random_property_star_graph(rng: random.Random, n_faces: int, p_square: float = 0.35,
                               p_uncontract: float = 0.3, max_steps: int = 400, contract: bool = True):
    """Random graph with ``n_faces`` inner faces and a known reduction sequence.

    With ``contract`` the finished graph has its degree-2 vertices
    contracted (the reduction trace then starts with the matching
    uncontractions).
    """
    G = single_edge()
    history = []
    steps = 0
    while len(G.inner_faces) < n_faces and steps < max_steps:
        steps += 1
        u = rng.random()
        if u < p_square:
            sq = _square_candidates(G)
            if sq:
                G, rec = square_move(G, rng.choice(sq))
                history.append(rec)
                continue
            small = [f for f in G.inner_faces if G.face_length(f) <= 4]
            if small:
                trial = list(history)
                H = make_square(G, rng.choice(small), rng, trial)
                if H is not None and len(H.inner_faces) <= n_faces:
                    G = H
                    history = trial
                    sq = _square_candidates(G)
                    if sq:
                        G, rec = square_move(G, rng.choice(sq))
                        history.append(rec)
                continue
        if u < p_square + p_uncontract and G.inner_faces:
            res = random_uncontract(G, rng)
            if res:
                G, rec = res
                history.append(rec)
                continue
        e = rng.choice(G.edge_ids)
        G, rec = bigon_insert(G, e, _next_label(G))
        history.append(rec)
    # a few trailing square moves mix the structure further
    for _ in range(rng.randint(0, 3)):
        sq = _square_candidates(G)
        if not sq:
            break
        G, rec = square_move(G, rng.choice(sq))
        history.append(rec)
    if contract:
        recs = []
        G = contract_all(G, recs)
        history.extend(recs)
    return G, _record_path(history)


def graph_from_plan(plan, rng: random.Random, max_tries: int = 20000, accept=None):
    """Grow a graph realising a prescribed reduction face sequence.

    ``plan`` is the reduction sequence as a list of (kind, face) with kind
    'S' or 'B'.  The growth runs it backwards with random uncontractions
    and random edge choices, restarting whenever a square move is due at a
    face that is not a square with all corners of degree at least 3.
    ``accept`` is an optional predicate on the finished graph.
    """
    pending_s = {}
    for kind, f in plan:
        if kind == "S":
            pending_s[f] = pending_s.get(f, 0) + 1
    for _ in range(max_tries):
        G = single_edge()
        history = []
        todo = dict(pending_s)
        ok = True
        for kind, f in reversed(plan):
            for _ in range(rng.randint(0, 3)):
                targets = [g for g in todo if todo[g] and g in G.faces and g != f]
                if targets and rng.random() < 0.5:
                    g = rng.choice(targets)
                    res = grow_face(G, g, rng) if G.face_length(g) < 4 else None
                else:
                    res = random_uncontract(G, rng)
                if res:
                    G, rec = res
                    history.append(rec)
            if kind == "B":
                e = rng.choice(G.edge_ids)
                G, rec = bigon_insert(G, e, f)
            else:
                if f in G.faces and G.face_length(f) < 4:
                    res = grow_face(G, f, rng)
                    if res:
                        G, rec = res
                        history.append(rec)
                if f not in _square_candidates(G):
                    ok = False
                    break
                G, rec = square_move(G, f)
                todo[f] -= 1
            history.append(rec)
        if not ok:
            continue
        rs = _record_path(history)
        if accept is None or accept(G, rs):
            return G, rs
    raise RuntimeError("could not realise the requested plan")
