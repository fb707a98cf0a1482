"""Perfect matchings, face flips, the dimer lattice, heights and D_G."""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import FlipNotApplicable, NonUniqueMinimum, TooLarge
from .graph_core import PlaneBipartiteGraph, face_edge_classes
from .laurent import LaurentPoly

MAX_EDGES = 64


def face_var(f) -> str:
    return f"y{f}"


def face_vars(G: PlaneBipartiteGraph, prefix="y"):
    return tuple(f"{prefix}{f}" for f in G.inner_faces)


def edge_vars(G: PlaneBipartiteGraph):
    return tuple(f"z{e}" for e in G.edge_ids)


# ---------------------------------------------------------------------------
# enumeration

def enumerate_matchings(G: PlaneBipartiteGraph, max_edges: int = MAX_EDGES):
    """All perfect matchings as frozensets of edge ids, in lex order."""
    if len(G.edges) > max_edges:
        raise TooLarge(f"{len(G.edges)} edges exceeds the enumeration cap {max_edges}")
    verts = G.vertices
    vbit = {v: 1 << i for i, v in enumerate(verts)}
    full = (1 << len(verts)) - 1
    inc = {v: sorted(G.rot[v]) for v in verts}
    other = {}
    for e, (b, w) in G.edges.items():
        other[(e, b)] = w
        other[(e, w)] = b
    out = []
    chosen = []

    def rec(covered):
        if covered == full:
            out.append(tuple(sorted(chosen)))
            return
        # lowest uncovered vertex
        low = (~covered) & (covered + 1)
        v = verts[low.bit_length() - 1]
        for e in inc[v]:
            u = other[(e, v)]
            ub = vbit[u]
            if covered & ub:
                continue
            chosen.append(e)
            rec(covered | low | ub)
            chosen.pop()

    if len(verts) % 2 == 0:
        rec(0)
    out.sort()
    return [frozenset(m) for m in out]


def is_perfect_matching(G: PlaneBipartiteGraph, M) -> bool:
    seen = set()
    for e in M:
        for v in G.edges[e]:
            if v in seen:
                return False
            seen.add(v)
    return len(seen) == len(G.colors)


# ---------------------------------------------------------------------------
# flips

def can_flip(G: PlaneBipartiteGraph, M, f, direction: str) -> bool:
    bw, wb = face_edge_classes(G, f)
    if len(set(bw) | set(wb)) != len(bw) + len(wb):
        return False
    need = bw if direction == "down" else wb
    return all(e in M for e in need)


def flip(G: PlaneBipartiteGraph, M, f, direction: str):
    """Down-flip swaps the BlackWhite edges of f for its WhiteBlack ones."""
    if direction not in ("up", "down"):
        raise ValueError("direction must be 'up' or 'down'")
    if not can_flip(G, M, f, direction):
        raise FlipNotApplicable(f"matching cannot be flipped {direction} at face {f}")
    bw, wb = face_edge_classes(G, f)
    old, new = (bw, wb) if direction == "down" else (wb, bw)
    return frozenset((set(M) - set(old)) | set(new))


def down_flippable(G, M):
    return [f for f in G.inner_faces if can_flip(G, M, f, "down")]


def up_flippable(G, M):
    return [f for f in G.inner_faces if can_flip(G, M, f, "up")]


def minimal_matching(G: PlaneBipartiteGraph, start=None, matchings=None):
    """The unique matching with no down-flip, found by flipping down."""
    if matchings is None:
        matchings = enumerate_matchings(G)
    if not matchings:
        raise NonUniqueMinimum("graph has no perfect matching")
    M = start if start is not None else matchings[0]
    guard = 0
    while True:
        fs = down_flippable(G, M)
        if not fs:
            break
        M = flip(G, M, fs[0], "down")
        guard += 1
        if guard > 10 ** 6:
            raise NonUniqueMinimum("down-flips did not terminate")
    bottoms = [N for N in matchings if not down_flippable(G, N)]
    if len(bottoms) != 1 or bottoms[0] != M:
        raise NonUniqueMinimum(f"{len(bottoms)} matchings admit no down-flip")
    return M


# ---------------------------------------------------------------------------
# lattice

@dataclass
class DimerLattice:
    elements: list
    covers: list                  # (lower index, upper index, face)
    bottom: int
    index: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.elements)

    def upper_covers(self, i):
        return [(j, f) for (a, j, f) in self.covers if a == i]

    def lower_covers(self, j):
        return [(i, f) for (i, b, f) in self.covers if b == j]

    def top(self):
        tops = [i for i in range(len(self.elements)) if not self.upper_covers(i)]
        assert len(tops) == 1
        return tops[0]

    def to_json(self, G=None):
        out = {"elements": [sorted(M) for M in self.elements],
               "covers": [[a, b, f] for a, b, f in self.covers], "bottom": self.bottom}
        if G is not None:
            out["heights"] = [[height(G, M, self.elements[self.bottom])[f] for f in G.inner_faces]
                              for M in self.elements]
        return out

    def to_dot(self, G, name="D") -> str:
        base = self.elements[self.bottom]
        lines = [f"digraph {name} {{", "  rankdir=BT;"]
        for i, M in enumerate(self.elements):
            ht = height(G, M, base)
            mono = "*".join(f"y{f}" + (f"^{ht[f]}" if ht[f] > 1 else "") for f in G.inner_faces if ht[f])
            lines.append(f'  n{i} [label="{mono or 1}"];')
        for a, b, f in self.covers:
            lines.append(f'  n{a} -> n{b} [label="{f}"];')
        lines.append("}")
        return "\n".join(lines)


def build_lattice(G: PlaneBipartiteGraph, matchings=None) -> DimerLattice:
    if matchings is None:
        matchings = enumerate_matchings(G)
    index = {M: i for i, M in enumerate(matchings)}
    covers = []
    for i, M in enumerate(matchings):
        for f in up_flippable(G, M):
            covers.append((i, index[flip(G, M, f, "up")], f))
    bottom = index[minimal_matching(G, matchings=matchings)]
    return DimerLattice(list(matchings), covers, bottom, index)


# ---------------------------------------------------------------------------
# heights

def _oriented_difference(M, base):
    """Half-edges of M symmetric-difference base: M-edges b->w, base-edges w->b."""
    hs = [2 * e for e in M - base] + [2 * e + 1 for e in base - M]
    return sorted(hs)


def height(G: PlaneBipartiteGraph, M, base=None) -> dict:
    """Height vector of M relative to ``base`` (default: the minimum).

    Crossing an oriented difference edge from its left to its right adds 1.
    Computed by a breadth-first walk in the dual graph from the outer face
    and checked on every edge.
    """
    M = frozenset(M)
    if base is None:
        base = minimal_matching(G)
    base = frozenset(base)
    step = {}
    for h in _oriented_difference(M, base):
        step[h] = 1
        step[h ^ 1] = -1
    ht = {G.outer: 0}
    queue = [G.outer]
    while queue:
        f = queue.pop()
        for h in G.faces[f]:
            g = G.face_of[h ^ 1]
            val = ht[f] + step.get(h, 0)
            if g in ht:
                if ht[g] != val:
                    raise AssertionError(f"height is path dependent at face {g}")
            else:
                ht[g] = val
                queue.append(g)
    return ht


def height_vector(G, M, base=None):
    ht = height(G, M, base)
    return tuple(ht[f] for f in G.inner_faces)


def _difference_cycles(G, M, base):
    hs = _oriented_difference(frozenset(M), frozenset(base))
    out_of = {}
    for h in hs:
        out_of.setdefault(G.tail(h), []).append(h)
    used = set()
    cycles = []
    for h in hs:
        if h in used:
            continue
        cyc = []
        x = h
        while x not in used:
            used.add(x)
            cyc.append(x)
            nxt = [y for y in out_of[G.head(x)] if y not in used]
            if not nxt:
                break
            x = nxt[0]
        cycles.append(cyc)
    return cycles


def height_by_winding(G: PlaneBipartiteGraph, M, base=None) -> dict:
    """Independent height oracle: signed count of difference cycles around each face.

    A cycle is clockwise when its enclosed region lies on its right; each
    clockwise cycle adds 1 to the faces it encloses and each
    counterclockwise one subtracts 1.
    """
    if base is None:
        base = minimal_matching(G)
    ht = {f: 0 for f in G.faces}
    for cyc in _difference_cycles(G, M, base):
        wall = {h >> 1 for h in cyc}
        right_seed = G.face_of[cyc[0] ^ 1]
        left_seed = G.face_of[cyc[0]]
        region = {right_seed}
        stack = [right_seed]
        while stack:
            f = stack.pop()
            for h in G.faces[f]:
                if h >> 1 in wall:
                    continue
                g = G.face_of[h ^ 1]
                if g not in region:
                    region.add(g)
                    stack.append(g)
        assert left_seed not in region
        if G.outer in region:
            inside = set(G.faces) - region
            sign = -1
        else:
            inside = region
            sign = 1
        for f in inside:
            ht[f] += sign
    return ht


# ---------------------------------------------------------------------------
# polynomials

def monomial(G, exps: dict, prefix="y"):
    vars = face_vars(G, prefix)
    return LaurentPoly(vars, {tuple(exps.get(f, 0) for f in G.inner_faces): 1})


def all_ranks(G: PlaneBipartiteGraph, lattice: DimerLattice) -> list:
    """Multivariate rank of every element by dynamic programming on covers.

    Every lower cover must give the same answer, which is the
    chain-independence statement for all saturated chains at once.
    """
    n = len(lattice.elements)
    lower = {j: [] for j in range(n)}
    upper = {i: [] for i in range(n)}
    for i, j, f in lattice.covers:
        lower[j].append((i, f))
        upper[i].append(j)
    idx = {f: k for k, f in enumerate(G.inner_faces)}
    rank = [None] * n
    rank[lattice.bottom] = (0,) * len(idx)
    # Kahn order from the bottom
    indeg = {j: len(lower[j]) for j in range(n)}
    queue = [j for j in range(n) if indeg[j] == 0]
    if queue != [lattice.bottom]:
        raise NonUniqueMinimum("lattice has more than one minimal element")
    order = []
    while queue:
        i = queue.pop(0)
        order.append(i)
        for j in upper[i]:
            indeg[j] -= 1
            if indeg[j] == 0:
                queue.append(j)
    for j in order:
        if j == lattice.bottom:
            continue
        vals = set()
        for i, f in lower[j]:
            e = list(rank[i])
            e[idx[f]] += 1
            vals.add(tuple(e))
        if len(vals) != 1:
            raise AssertionError(f"saturated chains to element {j} disagree")
        rank[j] = vals.pop()
    vars = face_vars(G)
    return [LaurentPoly(vars, {r: 1}) for r in rank]


def multivariate_rank(G: PlaneBipartiteGraph, lattice: DimerLattice, M) -> LaurentPoly:
    """Product of the flipped faces along saturated chains from the bottom to M.

    Two chains are walked (always flipping the first, or the last, available
    face downwards) and must agree.
    """
    M = frozenset(M)
    idx = {f: k for k, f in enumerate(G.inner_faces)}
    results = []
    for pick in (0, -1):
        e = [0] * len(idx)
        N = M
        while True:
            fs = down_flippable(G, N)
            if not fs:
                break
            f = fs[pick]
            e[idx[f]] += 1
            N = flip(G, N, f, "down")
        assert N == lattice.elements[lattice.bottom]
        results.append(tuple(e))
    if results[0] != results[1]:
        raise AssertionError("saturated chains give different weights")
    return LaurentPoly(face_vars(G), {results[0]: 1})


def dimer_face_polynomial(G: PlaneBipartiteGraph, method: str = "height", matchings=None) -> LaurentPoly:
    """D_G as a sum over matchings; ``method`` is 'height', 'chain' or 'winding'."""
    if matchings is None:
        matchings = enumerate_matchings(G)
    vars = face_vars(G)
    if not matchings:
        return LaurentPoly.one(vars)
    if method == "chain":
        lat = build_lattice(G, matchings)
        total = LaurentPoly.zero(vars)
        for r in all_ranks(G, lat):
            total = total + r
        return total
    base = minimal_matching(G, matchings=matchings)
    terms = {}
    for M in matchings:
        ht = height(G, M, base) if method == "height" else height_by_winding(G, M, base)
        key = tuple(ht[f] for f in G.inner_faces)
        terms[key] = terms.get(key, 0) + 1
    return LaurentPoly(vars, terms)


def h_vector(G: PlaneBipartiteGraph, M) -> dict:
    """h_f = |f|/2 - |M on f| - 1 for every inner face."""
    M = set(M)
    out = {}
    for f in G.inner_faces:
        edges = set(G.face_edges(f))
        out[f] = G.face_length(f) // 2 - len(edges & M) - 1
    return out


def partition_function(G: PlaneBipartiteGraph, matchings=None) -> LaurentPoly:
    if matchings is None:
        matchings = enumerate_matchings(G)
    vars = edge_vars(G)
    pos = {e: i for i, e in enumerate(G.edge_ids)}
    terms = {}
    for M in matchings:
        ex = [0] * len(vars)
        for e in M:
            ex[pos[e]] += 1
        terms[tuple(ex)] = terms.get(tuple(ex), 0) + 1
    return LaurentPoly(vars, terms)


def face_to_edge_images(G: PlaneBipartiteGraph) -> dict:
    """y_f -> (product of BlackWhite z_e) / (product of WhiteBlack z_e)."""
    vars = edge_vars(G)
    pos = {e: i for i, e in enumerate(G.edge_ids)}
    out = {}
    for f in G.inner_faces:
        ex = [0] * len(vars)
        bw, wb = face_edge_classes(G, f)
        for e in bw:
            ex[pos[e]] += 1
        for e in wb:
            ex[pos[e]] -= 1
        out[face_var(f)] = LaurentPoly(vars, {tuple(ex): 1})
    return out


def edge_substitution(G: PlaneBipartiteGraph, D: LaurentPoly | None = None, base=None) -> LaurentPoly:
    """Turn D_G into the partition function Z_G."""
    if D is None:
        D = dimer_face_polynomial(G)
    if base is None:
        base = minimal_matching(G)
    vars = edge_vars(G)
    img = D.substitute(face_to_edge_images(G), target_vars=vars)
    pos = {e: i for i, e in enumerate(G.edge_ids)}
    ex = [0] * len(vars)
    for e in base:
        ex[pos[e]] += 1
    return img * LaurentPoly(vars, {tuple(ex): 1})


# ---------------------------------------------------------------------------
# lattice sanity

def check_distributive(G: PlaneBipartiteGraph, lattice: DimerLattice) -> bool:
    """Heights of all elements are closed under componentwise min and max,
    and the cover relation is exactly a +1 step in one coordinate."""
    base = lattice.elements[lattice.bottom]
    hts = [height_vector(G, M, base) for M in lattice.elements]
    hs = set(hts)
    if len(hs) != len(hts):
        return False
    for a in hts:
        for b in hts:
            if tuple(map(min, a, b)) not in hs or tuple(map(max, a, b)) not in hs:
                return False
    idx = {f: k for k, f in enumerate(G.inner_faces)}
    for i, j, f in lattice.covers:
        d = [y - x for x, y in zip(hts[i], hts[j])]
        if d != [1 if k == idx[f] else 0 for k in range(len(d))]:
            return False
    # every single-coordinate step between elements is a cover
    ncov = sum(1 for a in hts for b in hts
               if sum(y - x for x, y in zip(a, b)) == 1 and all(y >= x for x, y in zip(a, b)))
    return ncov == len(lattice.covers)


def lattice_json(G, lattice) -> str:
    return json.dumps(lattice.to_json(G))


# ---------------------------------------------------------------------------
# graphs without property (*)

def pruned_components(G: PlaneBipartiteGraph):
    """Components of G after deleting edges in no perfect matching."""
    from .graph_core import subgraph_components
    used = set()
    for M in enumerate_matchings(G):
        used |= M
    return subgraph_components(G, set(G.colors), used)


def dimer_face_polynomial_general(G: PlaneBipartiteGraph) -> LaurentPoly:
    """Product of D over the pruned components (1 if no matching exists)."""
    if not enumerate_matchings(G):
        return LaurentPoly.one(())
    comps = pruned_components(G)
    names = []
    for H in comps:
        for v in face_vars(H):
            if v not in names:
                names.append(v)
    total = LaurentPoly.one(names)
    for H in comps:
        total = total * dimer_face_polynomial(H).with_vars(names)
    return total
