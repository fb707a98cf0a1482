"""Oriented link diagrams from PD codes, their face-crossing incidence graphs,
Kauffman states and Alexander polynomials.

PD convention: ``X[a,b,c,d]`` lists the four segment ids around a crossing
counterclockwise, starting with the incoming under-strand, so the under
strand runs a -> c.  Ports are numbered 0..3 in that order and corner k of a
crossing sits between ports k and k+1.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field

from .errors import InconsistentOrientation, MalformedPD, SegmentNotExterior, SpecializationMismatch
from .graph_core import BLACK, WHITE, PlaneBipartiteGraph, subgraph_components
from .laurent import LaurentPoly, equal_up_to_unit
from .reports import Certificate, Report

T = ("t",)

# corner weights with the under-strand pointing north: S-E, E-N, N-W, W-S
CORNER_WEIGHT = {0: (1, 0), 1: (-1, 0), 2: (1, 1), 3: (-1, 1)}

UNDER_TO_OVER = "underToOver"
OVER_TO_UNDER = "overToUnder"
SAME = "same"


@dataclass
class Segment:
    label: int
    tail: tuple          # (crossing, port) where the segment leaves
    head: tuple          # (crossing, port) where the segment arrives
    component: int = 0

    @property
    def leaves_under(self) -> bool:
        return self.tail[1] == 2

    @property
    def enters_over(self) -> bool:
        return self.head[1] in (1, 3)

    @property
    def leaves_over(self) -> bool:
        return self.tail[1] in (1, 3)

    @property
    def enters_under(self) -> bool:
        return self.head[1] == 0


@dataclass
class LinkDiagram:
    crossings: list                    # tuples (a, b, c, d) of segment labels
    segments: dict                     # label -> Segment
    regions: list                      # each a tuple of corners (crossing, corner)
    region_of: dict = field(default_factory=dict)   # corner -> region index
    over_in: list = field(default_factory=list)     # port (1 or 3) where the over strand enters
    n_components: int = 1                           # link components
    map_components: int = 1                         # connected pieces of the diagram

    @property
    def n_crossings(self) -> int:
        return len(self.crossings)

    @property
    def segment_labels(self):
        return sorted(self.segments)

    def sign(self, k) -> int:
        # over strand running d -> b is a positive crossing
        return 1 if self.over_in[k] == 3 else -1

    def writhe(self) -> int:
        return sum(self.sign(k) for k in range(self.n_crossings))

    def segment_regions(self, j):
        """The two regions along segment j (left, right of its direction)."""
        k, p = self.segments[j].head
        return self.region_of[(k, p)], self.region_of[(k, (p - 1) % 4)]

    def segment_class(self, j) -> str:
        s = self.segments[j]
        if s.leaves_under and s.enters_over:
            return UNDER_TO_OVER
        if s.leaves_over and s.enters_under:
            return OVER_TO_UNDER
        return SAME

    def segment_classes(self) -> dict:
        return {j: self.segment_class(j) for j in self.segment_labels}

    def to_pd(self) -> str:
        return " ".join("X[" + ",".join(str(x) for x in X) + "]" for X in self.crossings)

    def summary(self) -> dict:
        return {"crossings": self.n_crossings, "segments": len(self.segments),
                "regions": len(self.regions), "components": self.n_components}

    def to_json(self):
        return {"pd": self.to_pd(), **self.summary(),
                "segments": {j: {"tail": list(s.tail), "head": list(s.head),
                                 "class": self.segment_class(j)}
                             for j, s in sorted(self.segments.items())}}


# ---------------------------------------------------------------------------
# parsing

_CROSSING = re.compile(r"X\s*\[\s*([^\]]*)\]")


def parse_pd(text: str, heads=None) -> LinkDiagram:
    """Parse a PD code such as ``X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]``.

    ``heads`` optionally maps a segment label to the crossing index it runs
    into, which fixes the orientation of components that only pass over.
    """
    text = text.strip()
    if text.startswith("PD[") and text.endswith("]"):
        text = text[3:-1]
    crossings = []
    pos = 0
    for m in _CROSSING.finditer(text):
        gap = text[pos:m.start()].strip(" ,\n\t")
        if gap:
            raise MalformedPD(f"unexpected text {gap!r}")
        pos = m.end()
        parts = [x.strip() for x in m.group(1).split(",")]
        if len(parts) != 4:
            raise MalformedPD(f"crossing {m.group(0)!r} does not have four entries")
        try:
            crossings.append(tuple(int(x) for x in parts))
        except ValueError:
            raise MalformedPD(f"non-integer segment label in {m.group(0)!r}") from None
    if text[pos:].strip(" ,\n\t"):
        raise MalformedPD(f"unexpected text {text[pos:].strip()!r}")
    if not crossings:
        raise MalformedPD("no crossings found")
    return diagram_from_crossings(crossings, heads)


def diagram_from_crossings(crossings, heads=None) -> LinkDiagram:
    crossings = [tuple(X) for X in crossings]
    ends: dict = {}
    for k, X in enumerate(crossings):
        for p, s in enumerate(X):
            ends.setdefault(s, []).append((k, p))
    for s, e in ends.items():
        if len(e) != 2:
            raise MalformedPD(f"segment {s} appears {len(e)} times")
    other_end = {}
    for s, (d1, d2) in ends.items():
        other_end[d1] = d2
        other_end[d2] = d1

    # orient each strand: at a crossing a dart continues through the opposite port
    head_of: dict = {}
    seen = set()
    comp_of = {}
    n_comp = 0
    for s0 in sorted(ends):
        if s0 in seen:
            continue
        # collect the cycle of segments as a list of (segment, entry dart, exit dart)
        cycle = []
        d = ends[s0][0]
        start = d
        while True:
            s = crossings[d[0]][d[1]]
            far = other_end[d]
            cycle.append((s, d, far))         # travelling from dart d to dart far
            nxt = (far[0], (far[1] + 2) % 4)
            d = nxt
            if d == start:
                break
            if len(cycle) > 2 * len(ends) + 2:
                raise MalformedPD("strand does not close up")
        forward = None
        for s, a, b in cycle:
            votes = []
            if b[1] == 0 or a[1] == 2:
                votes.append(True)
            if a[1] == 0 or b[1] == 2:
                votes.append(False)
            if heads and s in heads and a[0] != b[0]:
                votes.append(b[0] == heads[s])
            for v in votes:
                if forward is None:
                    forward = v
                elif forward != v:
                    raise InconsistentOrientation(f"segment {s} is forced both ways along its component")
        if forward is None:
            # over-only component: follow increasing labels
            labs = [s for s, _, _ in cycle]
            i = labs.index(min(labs))
            forward = labs[(i + 1) % len(labs)] >= labs[i - 1]
        for s, a, b in cycle:
            if s in seen and s != s0:
                raise MalformedPD(f"segment {s} is used twice on a strand")
            seen.add(s)
            comp_of[s] = n_comp
            head_of[s] = (a, b) if forward else (b, a)
        n_comp += 1

    over_in = []
    for k, X in enumerate(crossings):
        b_in = head_of[X[1]][1] == (k, 1)
        d_in = head_of[X[3]][1] == (k, 3)
        if b_in == d_in:
            raise InconsistentOrientation(f"over strand at crossing {k} is not consistently oriented")
        over_in.append(1 if b_in else 3)

    segments = {s: Segment(s, tail=head_of[s][0], head=head_of[s][1], component=comp_of[s])
                for s in ends}
    regions, region_of = _regions(crossings, other_end)

    # Euler check for every connected piece of the 4-valent map
    pieces = _map_pieces(crossings, ends)
    for piece in pieces:
        v = len(piece)
        e = len({s for k in piece for s in crossings[k]})
        f = len({region_of[(k, c)] for k in piece for c in range(4)})
        if v - e + f != 2:
            raise MalformedPD(f"PD code is not planar (V-E+F = {v - e + f})")
    return LinkDiagram(crossings, segments, regions, region_of, over_in, n_comp, len(pieces))


def _regions(crossings, other_end):
    region_of = {}
    regions = []
    for k in range(len(crossings)):
        for c in range(4):
            if (k, c) in region_of:
                continue
            # after visiting corner c the walk leaves along port c
            corners = []
            first = (k, c)
            corner = first
            while True:
                region_of[corner] = len(regions)
                corners.append(corner)
                k2, p2 = other_end[corner]
                corner = (k2, (p2 - 1) % 4)
                if corner == first:
                    break
                if corner in region_of:
                    raise MalformedPD("region walk did not close up")
            regions.append(tuple(corners))
    return regions, region_of


def _map_pieces(crossings, ends):
    adj = {k: set() for k in range(len(crossings))}
    for s, ((k1, _), (k2, _)) in ends.items():
        adj[k1].add(k2)
        adj[k2].add(k1)
    return _components(adj)


def _components(adj):
    seen = set()
    out = []
    for v in sorted(adj):
        if v in seen:
            continue
        comp = {v}
        stack = [v]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in comp:
                    comp.add(y)
                    stack.append(y)
        seen |= comp
        out.append(comp)
    return out


# ---------------------------------------------------------------------------
# validation

def validate_diagram(L: LinkDiagram) -> Certificate:
    """Connected, prime-like, no nugatory crossings; curls reported separately."""
    n = L.n_crossings
    seg_ends = {j: (s.tail[0], s.head[0]) for j, s in L.segments.items()}
    adj = {k: set() for k in range(n)}
    for a, b in seg_ends.values():
        if a != b:
            adj[a].add(b)
            adj[b].add(a)
    connected = len(_components(adj)) == 1
    curls = [k for k, X in enumerate(L.crossings) if len(set(X)) < 4]

    nugatory = []
    for k in range(n):
        if k in curls:
            nugatory.append(k)
            continue
        rest = {v: {u for u in adj[v] if u != k} for v in adj if v != k}
        # a crossing is nugatory when removing it disconnects its own piece
        piece = next(c for c in _components(adj) if k in c)
        if len(piece) > 1:
            if len([c for c in _components({v: rest[v] for v in piece if v != k})]) > 1:
                nugatory.append(k)

    not_prime = None
    labels = L.segment_labels
    for piece in _components(adj):
        if not_prime:
            break
        segs = [j for j in labels if seg_ends[j][0] in piece]
        for j1, j2 in itertools.combinations(segs, 2):
            madj = {k: set() for k in piece}
            for j in segs:
                if j in (j1, j2):
                    continue
                a, b = seg_ends[j]
                madj[a].add(b)
                madj[b].add(a)
            comps = _components(madj)
            if len(comps) > 1:
                not_prime = {"segments": [j1, j2], "sides": [sorted(c) for c in comps]}
                break
    prime_like = connected and not_prime is None
    holds = connected and prime_like and not nugatory
    return Certificate(holds, {"disconnected": not connected, "cut": not_prime,
                               "nugatory": nugatory, "curls": curls},
                       {"connected": connected, "prime_like": prime_like,
                        "no_nugatory": not nugatory, "curl_free": not curls})


# ---------------------------------------------------------------------------
# incidence graphs

def corner_edge(k, c) -> int:
    return 4 * k + c


def edge_corner(e):
    return divmod(e, 4)


def face_crossing_graph(L: LinkDiagram, outer=None) -> PlaneBipartiteGraph:
    """G_L: black b_k per crossing, white per region, one edge per corner.

    Black vertices are 0..n-1, the white vertex of region r is n + r, the
    edge of corner c at crossing k has id 4k + c, and the face holding
    segment j is labelled j.  ``outer`` picks the segment whose face is drawn
    as the infinite one (default: smallest label).
    """
    if L.map_components != 1:
        from .errors import Disconnected
        raise Disconnected("the diagram is not connected")
    n = L.n_crossings
    colors = {k: BLACK for k in range(n)}
    colors.update({n + r: WHITE for r in range(len(L.regions))})
    edges = {}
    rot = {k: tuple(corner_edge(k, c) for c in range(4)) for k in range(n)}
    for r, corners in enumerate(L.regions):
        for k, c in corners:
            edges[corner_edge(k, c)] = (k, n + r)
        rot[n + r] = tuple(corner_edge(k, c) for k, c in corners)
    anchors = {}
    for j, s in L.segments.items():
        k, p = s.head
        anchors[j] = 2 * corner_edge(k, (p - 1) % 4)
    if outer is None:
        outer = min(L.segments)
    G = PlaneBipartiteGraph(colors, edges, rot, anchors, outer)
    for j, s in L.segments.items():
        want = {corner_edge(k, c) for k, p in (s.head, s.tail) for c in ((p - 1) % 4, p)}
        if not want <= set(G.face_edges(j)):
            raise AssertionError(f"face {j} of G_L does not surround segment {j}")
    return G


def absent_regions(L: LinkDiagram, i):
    return tuple(sorted(set(L.segment_regions(i))))


def truncated_components(L: LinkDiagram, i):
    """Components of G_{L,i}, with the face of segment i as the outer face."""
    if i not in L.segments:
        raise KeyError(f"no segment {i}")
    G = face_crossing_graph(L, outer=i)
    n = L.n_crossings
    drop = {n + r for r in absent_regions(L, i)}
    keep = [v for v in G.colors if v not in drop]
    return subgraph_components(G, keep, G.edge_ids)


def truncated_graph(L: LinkDiagram, i) -> PlaneBipartiteGraph:
    """G_{L,i}: G_L with f_i outside and the two white vertices of f_i deleted."""
    comps = truncated_components(L, i)
    if len(comps) != 1:
        from .errors import Disconnected
        raise Disconnected(f"G_(L,{i}) has {len(comps)} components; use truncated_components")
    return comps[0]


# ---------------------------------------------------------------------------
# Kauffman states

@dataclass(frozen=True)
class KauffmanState:
    corners: tuple          # corner index chosen at each crossing

    def regions(self, L: LinkDiagram):
        return tuple(L.region_of[(k, c)] for k, c in enumerate(self.corners))

    def matching(self):
        return frozenset(corner_edge(k, c) for k, c in enumerate(self.corners))


@dataclass
class StateWeight:
    weight: LaurentPoly
    black_holes: int

    @property
    def signed(self) -> LaurentPoly:
        return -self.weight if self.black_holes % 2 else self.weight


def is_black_hole(L: LinkDiagram, k, c) -> bool:
    # the corner ahead of the over strand and to the right of the under strand
    return c == (0 if L.over_in[k] == 1 else 3)


def state_weight(L: LinkDiagram, S: KauffmanState) -> StateWeight:
    sign, power, holes = 1, 0, 0
    for k, c in enumerate(S.corners):
        s, p = CORNER_WEIGHT[c]
        sign *= s
        power += p
        holes += is_black_hole(L, k, c)
    return StateWeight(LaurentPoly.monomial(T, (power,), sign), holes)


def brute_force_states(L: LinkDiagram, i):
    """All bijections crossing -> present region, by backtracking."""
    absent = set(absent_regions(L, i))
    n = L.n_crossings
    out = []
    used = set()
    pick = [None] * n

    def rec(k):
        if k == n:
            out.append(KauffmanState(tuple(pick)))
            return
        for c in range(4):
            r = L.region_of[(k, c)]
            if r in absent or r in used:
                continue
            used.add(r)
            pick[k] = c
            rec(k + 1)
            used.discard(r)

    rec(0)
    return sorted(out, key=lambda S: S.corners)


def state_from_matching(M) -> KauffmanState:
    corners = dict(edge_corner(e) for e in M)
    return KauffmanState(tuple(corners[k] for k in range(len(corners))))


def clock_moves(L: LinkDiagram, S: KauffmanState, i):
    """States reachable from S by one clockwise clock move, with the segment used."""
    out = []
    for j, s in sorted(L.segments.items()):
        if j == i:
            continue
        (k1, p1), (k2, p2) = s.tail, s.head
        if k1 == k2:
            continue
        if S.corners[k1] == p1 and S.corners[k2] == p2:
            new = list(S.corners)
            new[k1] = (p1 - 1) % 4
            new[k2] = (p2 - 1) % 4
            out.append((KauffmanState(tuple(new)), j))
    return out


def clock_lattice(L: LinkDiagram, i):
    """States and clock-move covers (lower, upper, segment), built directly."""
    states = brute_force_states(L, i)
    index = {S: n for n, S in enumerate(states)}
    covers = []
    for S in states:
        for T2, j in clock_moves(L, S, i):
            if T2 in index:
                covers.append((index[T2], index[S], j))
    return states, sorted(covers)


def kauffman_states(L: LinkDiagram, i):
    """States of (L, i) via matchings of G_{L,i}, with a lattice isomorphism certificate.

    Returns (states, certificate).  The certificate compares the clock
    lattice built from clock moves with the dimer lattice of G_{L,i}.
    """
    from .dimer import build_lattice, enumerate_matchings
    comps = truncated_components(L, i)
    per = [enumerate_matchings(H) for H in comps]
    matchings = [frozenset().union(*ms) for ms in itertools.product(*per)]
    states = sorted((state_from_matching(M) for M in matchings), key=lambda S: S.corners)
    direct, clock_covers = clock_lattice(L, i)
    same_states = states == direct
    # dimer covers: a flip on face j of one component, others fixed
    dimer_covers = set()
    index = {S: n for n, S in enumerate(direct)}
    for H, ms in zip(comps, per):
        lat = build_lattice(H, ms)
        rest = [per[m] for m in range(len(comps)) if comps[m] is not H]
        for lo, hi, f in lat.covers:
            for others in itertools.product(*rest):
                base = frozenset().union(*others) if others else frozenset()
                a = state_from_matching(lat.elements[lo] | base)
                b = state_from_matching(lat.elements[hi] | base)
                dimer_covers.add((index.get(a), index.get(b), f))
    clock_set = set(clock_covers)
    reversed_set = {(b, a, f) for a, b, f in clock_set}
    if dimer_covers == clock_set:
        orientation = "same"
    elif dimer_covers == reversed_set:
        orientation = "reversed"
    else:
        orientation = None
    holds = same_states and orientation is not None
    return states, Certificate(holds, {"orientation": orientation},
                               {"states": len(states), "covers": len(clock_set),
                                "dimer_covers": len(dimer_covers)})


# ---------------------------------------------------------------------------
# Alexander polynomial

def alexander_state_sum(L: LinkDiagram, i=None, states=None) -> LaurentPoly:
    """Sum over Kauffman states of (-1)^{b(S)} <L|S>."""
    if i is None:
        i = min(L.segments)
    if states is None:
        states = brute_force_states(L, i)
    total = LaurentPoly.zero(T)
    for S in states:
        total = total + state_weight(L, S).signed
    return total


def specialization_values(L: LinkDiagram, convention: str = "under_to_over_is_minus_t") -> dict:
    """y_j -> -t, -1/t or -1 according to the over/under data at the ends of j."""
    minus_t = LaurentPoly.monomial(T, (1,), -1)
    minus_inv = LaurentPoly.monomial(T, (-1,), -1)
    if convention != "under_to_over_is_minus_t":
        minus_t, minus_inv = minus_inv, minus_t
    out = {}
    for j, cls in L.segment_classes().items():
        if cls == UNDER_TO_OVER:
            out[j] = minus_t
        elif cls == OVER_TO_UNDER:
            out[j] = minus_inv
        else:
            out[j] = LaurentPoly.const(T, -1)
    return out


def specialize_dimer(D: LaurentPoly, L: LinkDiagram, convention="under_to_over_is_minus_t"):
    vals = specialization_values(L, convention)
    sigma = {f"y{j}": vals[j] for j in L.segments if f"y{j}" in D.vars}
    return D.substitute(sigma, T)


def truncated_dimer_polynomial(L: LinkDiagram, i) -> LaurentPoly:
    """D_{G_{L,i}}, the product over components when G_{L,i} splits."""
    from .dimer import dimer_face_polynomial, face_vars
    comps = truncated_components(L, i)
    names = []
    for H in comps:
        names.extend(face_vars(H))
    total = LaurentPoly.one(names)
    for H in comps:
        total = total * dimer_face_polynomial(H).with_vars(names)
    return total


def bottom_state(L: LinkDiagram, i) -> KauffmanState:
    from .dimer import minimal_matching
    M = frozenset()
    for H in truncated_components(L, i):
        M |= minimal_matching(H)
    return state_from_matching(M)


def alexander_from_dimer(L: LinkDiagram, i=None, convention="under_to_over_is_minus_t", check=True):
    """Specialized D_{G_{L,i}} and a report on the exact prefactor identity.

    The identity compared is
    D(t) = (-1)^{b(bottom)} <L|bottom>^{-1} * sum_S (-1)^{b(S)} <L|S>.
    Raises SpecializationMismatch when ``check`` is set and it fails.
    """
    if i is None:
        i = min(L.segments)
    D = truncated_dimer_polynomial(L, i)
    spec = specialize_dimer(D, L, convention)
    oracle = alexander_state_sum(L, i)
    w0 = state_weight(L, bottom_state(L, i))
    pref = w0.signed.inverse_unit()
    exact = spec == pref * oracle
    equiv = equal_up_to_unit(spec, oracle)[0]
    rep = Report("alexander_from_dimer", exact and equiv,
                 {"segment": i, "D": D, "specialized": spec, "state_sum": oracle,
                  "prefactor": pref, "convention": convention})
    if check and not rep.ok:
        raise SpecializationMismatch("specialized dimer polynomial disagrees with the state sum", rep)
    return spec, rep


# ---------------------------------------------------------------------------
# Alexander matrix, an independent oracle

def _arcs(L: LinkDiagram):
    """Over-arcs: classes of segments glued through the over ports."""
    parent = {j: j for j in L.segments}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for X in L.crossings:
        parent[find(X[1])] = find(X[3])
    roots = sorted({find(j) for j in L.segments})
    index = {r: n for n, r in enumerate(roots)}
    return {j: index[find(j)] for j in L.segments}, len(roots)


def _bareiss_det(M):
    n = len(M)
    if n == 0:
        return LaurentPoly.one(T)
    A = [row[:] for row in M]
    sign = 1
    prev = LaurentPoly.one(T)
    for k in range(n - 1):
        if A[k][k].is_zero():
            for r in range(k + 1, n):
                if not A[r][k].is_zero():
                    A[k], A[r] = A[r], A[k]
                    sign = -sign
                    break
            else:
                return LaurentPoly.zero(T)
        for r in range(k + 1, n):
            for c in range(k + 1, n):
                num = A[r][c] * A[k][k] - A[r][k] * A[k][c]
                A[r][c] = num.exact_div(prev) if not num.is_zero() else num
        prev = A[k][k]
    d = A[n - 1][n - 1]
    return -d if sign < 0 else d


def alexander_matrix_oracle(L: LinkDiagram) -> LaurentPoly:
    """Delta via a minor of the Alexander matrix (one row per crossing).

    Row of a positive crossing: 1 - t on the over arc, t on the incoming
    under arc, -1 on the outgoing one; a negative crossing swaps the last
    two.  Defined up to a unit.
    """
    arc_of, n_arcs = _arcs(L)
    n = L.n_crossings
    zero = LaurentPoly.zero(T)
    if n_arcs > n:
        # some component only passes over, so it lifts off and the link splits
        return zero
    rows = []
    one_minus_t = LaurentPoly(T, {(0,): 1, (1,): -1})
    t = LaurentPoly.var(T, "t")
    for k, X in enumerate(L.crossings):
        row = [zero] * n_arcs
        a_in, a_out = (X[0], X[2]) if L.sign(k) > 0 else (X[2], X[0])
        row[arc_of[X[1]]] = row[arc_of[X[1]]] + one_minus_t
        row[arc_of[a_in]] = row[arc_of[a_in]] + t
        row[arc_of[a_out]] = row[arc_of[a_out]] - 1
        rows.append(row)
    if n == 1 and n_arcs == 1:
        return LaurentPoly.one(T)
    minor = [r[1:] for r in rows[1:]]
    return _bareiss_det(minor)


# ---------------------------------------------------------------------------
# connect sums

def exterior_segments(L: LinkDiagram, outer_region=None):
    """Segments bounding a region (default: the largest region)."""
    if outer_region is None:
        outer_region = max(range(len(L.regions)), key=lambda r: (len(L.regions[r]), -r))
    return [j for j in L.segment_labels if outer_region in L.segment_regions(j)]


def connect_sum(L1: LinkDiagram, i1, L2: LinkDiagram, i2, outer1=None, outer2=None):
    """Join L1 and L2 by cutting segments i1 and i2 and reconnecting them.

    ``outer1``/``outer2`` name the exterior regions (default: the largest
    one); i1 and i2 must bound them.  Segments of L2 are shifted past those
    of L1.  Returns (diagram, label of a joined segment, label of the other
    joined segment, label shift applied to L2).
    """
    for L, i, o in ((L1, i1, outer1), (L2, i2, outer2)):
        if i not in exterior_segments(L, o):
            raise SegmentNotExterior(f"segment {i} does not bound the exterior region")
    shift = max(L1.segments)
    X1 = [list(X) for X in L1.crossings]
    X2 = [[s + shift for s in X] for X in L2.crossings]
    # i1 becomes tail(i1) -> head(i2); i2 becomes tail(i2) -> head(i1)
    fresh = shift + max(L2.segments) + 1
    k, p = L2.segments[i2].head
    X2[k][p] = i1
    k, p = L1.segments[i1].head
    X1[k][p] = fresh
    k, p = L2.segments[i2].tail
    X2[k][p] = fresh
    L = diagram_from_crossings([tuple(X) for X in X1 + X2])
    return L, i1, fresh, shift


def connect_sum_check(L1: LinkDiagram, i1, L2: LinkDiagram, i2) -> Report:
    """G_{L1#L2, i#} is the disjoint union and D factorizes."""
    from .graph_core import isomorphic
    L, a, b, shift = connect_sum(L1, i1, L2, i2)
    comps = truncated_components(L, a)
    G1 = truncated_graph(L1, i1)
    G2 = truncated_graph(L2, i2)
    shapes_ok = len(comps) == 2 and sorted(len(H.colors) for H in comps) == \
        sorted((len(G1.colors), len(G2.colors)))
    iso = shapes_ok and any(isomorphic(comps[0], A, labels=False) and isomorphic(comps[1], B, labels=False)
                            for A, B in ((G1, G2), (G2, G1)))
    D = truncated_dimer_polynomial(L, a)
    D1 = truncated_dimer_polynomial(L1, i1)
    D2 = truncated_dimer_polynomial(L2, i2)
    D2s = D2.rename({f"y{j}": f"y{j + shift}" for j in L2.segments if f"y{j}" in D2.vars})
    names = sorted(set(D1.vars) | set(D2s.vars), key=lambda v: int(v[1:]))
    prod = D1.with_vars(names) * D2s.with_vars(names)
    fact = sorted(D.vars, key=lambda v: int(v[1:])) == names and D.with_vars(names) == prod
    delta = equal_up_to_unit(alexander_state_sum(L, a),
                             alexander_state_sum(L1, i1) * alexander_state_sum(L2, i2))[0]
    ok = iso and fact and delta
    return Report("connect_sum", ok, {"pd": L.to_pd(), "components": len(comps),
                                      "disjoint_union": iso, "factorizes": fact,
                                      "alexander_product": delta, "D": D})


# ---------------------------------------------------------------------------
# 2-bridge links

def continued_fraction(alpha):
    """Numerator and denominator of a1 + 1/(a2 + 1/(... + 1/am))."""
    from fractions import Fraction
    x = Fraction(alpha[-1])
    for a in reversed(alpha[:-1]):
        x = a + 1 / x
    return x.numerator, x.denominator


# port names around a crossing in counterclockwise order
_CCW_PORTS = ("NE", "NW", "SW", "SE")
_THROUGH = {"NW": "SE", "SE": "NW", "SW": "NE", "NE": "SW"}


def strand_diagram(cols, n_pos, closure, forward=False):
    """PD of a diagram drawn on horizontal strand positions 1..n_pos.

    ``cols`` lists crossings left to right as (p, over) where the crossing
    swaps positions p and p+1 and ``over`` is the pair of ports carrying the
    over strand, ("NW", "SE") or ("NE", "SW").  ``closure`` lists pairs of
    strand ends such as (("L", 1), ("L", 2)) or (("L", 1), ("R", 1)).
    With ``forward`` every strand is oriented left to right, as needed for
    braid closures; otherwise each component keeps the direction of its
    first walk.
    Returns (diagram, label of the segment through end ("L", n_pos)).
    """
    nbr = {}                        # node -> linked nodes (wires and closure arcs)

    def link(a, b):
        nbr.setdefault(a, []).append(b)
        nbr.setdefault(b, []).append(a)

    last = {q: ("L", q) for q in range(1, n_pos + 1)}
    for c, (p, _) in enumerate(cols):
        link(last[p], (c, "NW"))
        link(last[p + 1], (c, "SW"))
        last[p], last[p + 1] = (c, "NE"), (c, "SE")
    for q in range(1, n_pos + 1):
        link(last[q], ("R", q))
    for a, b in closure:
        link(a, b)

    def walk(port):
        # follow wires and closure arcs from a crossing port to the next one
        prev, cur = port, nbr[port][0]
        path = [cur]
        while not isinstance(cur[0], int):
            a, b = nbr[cur]
            prev, cur = cur, (b if a == prev else a)
            path.append(cur)
        return cur, path

    seg_at = {}
    marked = None
    label = 0
    heads = {}
    # exits first, so that a forward diagram starts every walk rightwards
    order = [(c, name) for c in range(len(cols)) for name in ("NE", "SE")] if forward else []
    order += [(c, name) for c in range(len(cols)) for name in _CCW_PORTS]
    for port in order:
        while port not in seg_at:
            far, path = walk(port)
            label += 1
            seg_at[port] = label
            seg_at[far] = label
            heads[label] = far
            if ("L", n_pos) in path:
                marked = label
            port = (far[0], _THROUGH[far[1]])
    crossings = []
    for c, (p, over) in enumerate(cols):
        under = [n for n in _CCW_PORTS if n not in over]
        incoming = next(n for n in under if heads[seg_at[(c, n)]] == (c, n))
        s = _CCW_PORTS.index(incoming)
        crossings.append(tuple(seg_at[(c, _CCW_PORTS[(s + r) % 4])] for r in range(4)))
    # heads pin down components that only ever pass over
    return diagram_from_crossings(crossings, {lab: far[0] for lab, far in heads.items()}), marked


def two_bridge(alpha):
    """The alternating 4-plat diagram C(alpha) and its lower segment.

    Strand positions are 1 (top) to 4 (bottom).  Twist region j turns the
    strands at positions 2, 3 (j odd) or 1, 2 (j even) alpha_j times.  The
    left end is capped as (1,2), (3,4); the right end the same way after an
    odd number of regions and as (2,3), (1,4) after an even number.  The
    strand at position 4 is never twisted and the segment running along it
    is the lower segment.
    """
    from .errors import EmptyAlpha
    alpha = list(alpha)
    if not alpha:
        raise EmptyAlpha("alpha must be nonempty")
    if any((not isinstance(a, int)) or a < 1 for a in alpha):
        raise EmptyAlpha(f"entries of alpha must be positive integers, got {alpha}")
    cols = []
    for j, a in enumerate(alpha):
        p = 2 if j % 2 == 0 else 1
        # alternating: the checkerboard colour above a crossing depends only on p
        over = ("NE", "SW") if p == 2 else ("NW", "SE")
        cols.extend([(p, over)] * a)
    closure = [(("L", 1), ("L", 2)), (("L", 3), ("L", 4))]
    if len(alpha) % 2:
        closure += [(("R", 1), ("R", 2)), (("R", 3), ("R", 4))]
    else:
        closure += [(("R", 2), ("R", 3)), (("R", 1), ("R", 4))]
    return strand_diagram(cols, 4, closure)


def braid_closure(word, n_strands=None) -> LinkDiagram:
    """Closure of a braid word: k > 0 is sigma_k, k < 0 its inverse."""
    word = list(word)
    if not word:
        raise MalformedPD("empty braid word has no crossings")
    n = n_strands or max(abs(k) for k in word) + 1
    if any(abs(k) >= n for k in word):
        raise MalformedPD(f"braid word {word} needs more than {n} strands")
    touched = {abs(k) for k in word} | {abs(k) + 1 for k in word}
    if len(touched) < n:
        # a strand meeting no crossing would be a split unknot with no PD entry
        raise MalformedPD(f"some of the {n} strands meet no crossing")
    cols = [(abs(k), ("NW", "SE") if k > 0 else ("NE", "SW")) for k in word]
    closure = [(("L", q), ("R", q)) for q in range(1, n + 1)]
    return strand_diagram(cols, n, closure, forward=True)[0]


def _relabel_left_to_right(G: PlaneBipartiteGraph, pos):
    """Inner faces numbered 1..n by the x-coordinate of their centroid."""
    def key(f):
        vs = G.face_vertices(f)
        return (sum(pos[v][0] for v in vs) / len(vs), sum(pos[v][1] for v in vs) / len(vs))
    inner = sorted(G.inner_faces, key=key)
    mapping = {f: k + 1 for k, f in enumerate(inner)}
    mapping[G.outer] = 0
    return G.relabel_faces(mapping)


def flock_graph(alpha) -> PlaneBipartiteGraph:
    """Birdwings in a row joined by connecting edges.

    Region j contributes blacks b(j,1..a_j), a white hub joined to all of
    them and whites w(j,r) between b(j,r) and b(j,r+1).  Hubs sit above the
    blacks for odd j and below for even j.  Connecting edges join hub j to
    b(j+1,1) and b(j,a_j) to hub j+1.  Inner faces are numbered left to right.
    """
    from .errors import EmptyAlpha
    from .graph_core import from_drawing
    alpha = list(alpha)
    if not alpha or any(a < 1 for a in alpha):
        raise EmptyAlpha(f"alpha must be a nonempty list of positive integers, got {alpha}")
    pos = {}
    edges = {}
    x0 = 0
    hubs = []
    blacks = []
    for j, a in enumerate(alpha):
        up = 1 if j % 2 == 0 else -1
        bs = [("b", j, r) for r in range(a)]
        for r, b in enumerate(bs):
            pos[b] = (x0 + 2 * r, 0, "b")
        hub = ("h", j)
        pos[hub] = (x0 + (a - 1), 3 * up, "w")
        for b in bs:
            edges[len(edges)] = (b, hub)
        for r in range(a - 1):
            w = ("w", j, r)
            pos[w] = (x0 + 2 * r + 1, -up, "w")
            edges[len(edges)] = (bs[r], w)
            edges[len(edges)] = (bs[r + 1], w)
        hubs.append(hub)
        blacks.append(bs)
        x0 += 2 * a + 1
    for j in range(len(alpha) - 1):
        edges[len(edges)] = (blacks[j + 1][0], hubs[j])
        edges[len(edges)] = (blacks[j][-1], hubs[j + 1])
    # integer vertex ids keep the graph JSON friendly
    ids = {v: n for n, v in enumerate(sorted(pos, key=lambda v: (pos[v][0], pos[v][1])))}
    pos2 = {ids[v]: p for v, p in pos.items()}
    edges2 = {e: (ids[b], ids[w]) for e, (b, w) in edges.items()}
    G = from_drawing(pos2, edges2)
    return _relabel_left_to_right(G, pos2)


def sign_sequence(alpha):
    out = []
    for j, a in enumerate(alpha):
        out.extend(["-" if j % 2 == 0 else "+"] * a)
    return out


def snake_boxes(alpha):
    """Lower-left corners of the boxes of the snake graph, in order."""
    s = sign_sequence(alpha)
    d = len(s) - 1
    boxes = [(0, 0)]
    labelled = "bottom"
    for j in range(1, d):
        x, y = boxes[-1]
        if s[j] != s[j - 1]:
            nxt = (x, y + 1) if labelled == "bottom" else (x + 1, y)
        else:
            nxt = (x + 1, y) if labelled == "bottom" else (x, y + 1)
        labelled = "bottom" if nxt[1] == y + 1 else "left"
        boxes.append(nxt)
    return boxes


def snake_graph(alpha) -> PlaneBipartiteGraph:
    """The snake graph of alpha with the lower-left vertex white; boxes are faces 1..d."""
    from .errors import EmptyAlpha
    from .graph_core import from_drawing
    alpha = list(alpha)
    if not alpha or any(a < 1 for a in alpha):
        raise EmptyAlpha(f"alpha must be a nonempty list of positive integers, got {alpha}")
    boxes = snake_boxes(alpha)
    if not boxes or sum(alpha) < 2:
        raise EmptyAlpha("the snake graph of alpha has no boxes")
    segs = set()
    for x, y in boxes:
        segs |= {((x, y), (x + 1, y)), ((x, y), (x, y + 1)), ((x + 1, y), (x + 1, y + 1)),
                 ((x, y + 1), (x + 1, y + 1))}
    pts = sorted({p for sgm in segs for p in sgm})
    ids = {p: n for n, p in enumerate(pts)}
    pos = {ids[p]: (p[0], p[1], "w" if (p[0] + p[1]) % 2 == 0 else "b") for p in pts}
    edges = {}
    for a, b in sorted(segs):
        u, v = ids[a], ids[b]
        edges[len(edges)] = (u, v) if pos[u][2] == "b" else (v, u)
    G = from_drawing(pos, edges)
    # faces are the boxes in order
    mapping = {G.outer: 0}
    for f in G.inner_faces:
        vs = G.face_vertices(f)
        corner = (min(pos[v][0] for v in vs), min(pos[v][1] for v in vs))
        mapping[f] = boxes.index(corner) + 1
    return G.relabel_faces(mapping)


def _heights_by_face(G: PlaneBipartiteGraph, matchings):
    from .dimer import minimal_matching, height
    base = minimal_matching(G, matchings=matchings)
    return {M: tuple(height(G, M, base)[f] for f in G.inner_faces) for M in matchings}


def flock_snake_equivalence(alpha) -> Report:
    """Flock graph and snake graph of alpha: same dimer lattice and D, path quivers.

    Both graphs are brought to their (E)-contraction normal form; a plane
    isomorphism between the normal forms gives the face bijection, under
    which heights, covers and D are compared.
    """
    from .dimer import build_lattice, dimer_face_polynomial, enumerate_matchings
    from .errors import MismatchReport
    from .graph_core import contract_all, dual_quiver, plane_isomorphisms
    F = flock_graph(alpha)
    S = snake_graph(alpha)
    isos = plane_isomorphisms(contract_all(F), contract_all(S))
    details = {"alpha": list(alpha), "normal_forms_isomorphic": bool(isos)}
    ok = bool(isos)
    if isos:
        fmap = isos[0][1]
        fmap = {f: g for f, g in fmap.items() if f != F.outer}
        details["face_bijection"] = fmap
        mF, mS = enumerate_matchings(F), enumerate_matchings(S)
        hF, hS = _heights_by_face(F, mF), _heights_by_face(S, mS)
        posS = {f: k for k, f in enumerate(S.inner_faces)}

        def moved(h):
            out = [0] * len(h)
            for f, x in zip(F.inner_faces, h):
                out[posS[fmap[f]]] = x
            return tuple(out)
        same_heights = sorted(moved(h) for h in hF.values()) == sorted(hS.values())
        latF, latS = build_lattice(F, mF), build_lattice(S, mS)
        covF = {(moved(hF[latF.elements[a]]), moved(hF[latF.elements[b]]), fmap[f]) for a, b, f in latF.covers}
        covS = {(hS[latS.elements[a]], hS[latS.elements[b]], f) for a, b, f in latS.covers}
        DF = dimer_face_polynomial(F, matchings=mF)
        DS = dimer_face_polynomial(S, matchings=mS)
        DFm = DF.rename({f"y{f}": f"__{g}" for f, g in fmap.items()})
        DFm = DFm.rename({f"__{g}": f"y{g}" for g in fmap.values()}).with_vars(DS.vars)
        paths = dual_quiver(F).is_oriented_path() and dual_quiver(S).is_oriented_path()
        details.update({"matchings": [len(mF), len(mS)], "heights_match": same_heights,
                        "covers_match": covF == covS, "D_equal": DFm == DS,
                        "type_A": paths, "D": DS})
        ok = same_heights and covF == covS and DFm == DS and paths
    rep = Report("flock_snake_equivalence", ok, details)
    if not ok:
        raise MismatchReport("flock and snake graphs disagree", rep)
    return rep


def _h_all_faces(G: PlaneBipartiteGraph, M) -> dict:
    # h_f = |f|/2 - |M on f| - 1, the outer face included
    M = set(M)
    return {f: G.face_length(f) // 2 - len(set(G.face_edges(f)) & M) - 1 for f in G.faces}


def link_cluster_check(L: LinkDiagram, segments=None) -> Report:
    """Every D_{G_{L,i}} is an F-polynomial of the extended dual quiver of G_L.

    For each segment i a reduction sequence of G_{L,i} is found and run in
    the extended dual quiver of G_L; F, the g-vector h(bottom) - e_{f_i},
    the initial-cluster expansion and the d-vector are compared.
    """
    from .cluster import d_vector, f_and_g, g_f_expansion, initial_seed, mutate_sequence
    from .dimer import enumerate_matchings, minimal_matching
    from .errors import MismatchReport
    from .graph_core import dual_quiver, extended_dual_quiver, find_reduction_sequence
    G = face_crossing_graph(L)
    Q = extended_dual_quiver(G)
    names = tuple(f"x{a}" for a in Q.labels)
    results = {}
    all_ok = True
    for i in (segments or L.segment_labels):
        H = truncated_graph(L, i)
        QH = dual_quiver(H)
        sub_ok = Q.induced(list(QH.labels)).b == QH.b
        seq = find_reduction_sequence(H).faces
        last = seq[-1]
        F, g, _ = f_and_g(Q, seq, last)
        D = truncated_dimer_polynomial(L, i)
        F_ok = F == D.with_vars(F.vars)
        ms = enumerate_matchings(H)
        bottom = minimal_matching(H, matchings=ms)
        hG = _h_all_faces(G, bottom)
        hG[i] -= 1
        g_want = tuple(hG[a] for a in Q.labels)
        g_ok = tuple(g) == g_want
        z = mutate_sequence(initial_seed(Q), seq).variable(last)
        terms = {}
        for M in ms:
            h = _h_all_faces(G, M)
            h[i] -= 1
            key = tuple(h[a] for a in Q.labels)
            terms[key] = terms.get(key, 0) + 1
        expansion = LaurentPoly(names, terms)
        exp_ok = z == expansion and g_f_expansion(Q, F, g) == z
        d = d_vector(z, names)
        n = L.n_crossings
        absent = {n + r for r in absent_regions(L, i)}
        d_want = tuple(0 if set(G.face_vertices(a)) & absent else 1 for a in Q.labels)
        d_ok = d == d_want
        ok = sub_ok and F_ok and g_ok and exp_ok and d_ok
        all_ok &= ok
        results[i] = {"sequence": seq, "induced_subquiver": sub_ok, "F": F_ok, "g": list(g),
                      "g_ok": g_ok, "expansion": exp_ok, "d": list(d), "d_ok": d_ok, "D": D}
    rep = Report("link_cluster_check", all_ok, {"segments": results})
    if not all_ok:
        raise MismatchReport("extended-quiver check failed for some segment", rep)
    return rep
