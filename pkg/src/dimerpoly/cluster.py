"""Seed mutation, principal coefficients, F-polynomials, g- and d-vectors.

Initial cluster variables of a quiver vertex ``a`` are named ``x<a>``; the
frozen vertex added for ``a`` by the principal framing is named ``y<a>``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import FrozenVertex, MismatchReport, NotHomogeneous
from .laurent import LaurentPoly
from .quiver import Quiver, frame, mutate_quiver  # noqa: F401  (re-exported)
from .reports import Report


def var_name(label) -> str:
    if isinstance(label, tuple) and len(label) == 2 and label[0] == "frozen":
        return f"y{label[1]}"
    return f"x{label}"


@dataclass(frozen=True)
class Seed:
    quiver: Quiver
    cluster: tuple           # LaurentPoly per vertex, in quiver label order

    @property
    def vars(self):
        return self.cluster[0].vars if self.cluster else ()

    def variable(self, label) -> LaurentPoly:
        return self.cluster[self.quiver.index(label)]

    def key(self):
        """Rendering used to memoise seeds."""
        return (self.quiver.b, tuple(p.to_text() for p in self.cluster))


def initial_seed(Q: Quiver) -> Seed:
    names = tuple(var_name(a) for a in Q.labels)
    return Seed(Q, tuple(LaurentPoly.var(names, v) for v in names))


def principal_seed(Q: Quiver) -> Seed:
    return initial_seed(Q.frame())


def _monomial_product(cluster, powers, vars):
    out = LaurentPoly.one(vars)
    for i, k in powers:
        out = out * (cluster[i] ** k)
    return out


def exchange_numerator(seed: Seed, k):
    Q = seed.quiver
    ki = Q.index(k)
    vars = seed.vars
    into = [(i, Q.b[i][ki]) for i in range(Q.n) if Q.b[i][ki] > 0]
    outof = [(i, -Q.b[i][ki]) for i in range(Q.n) if Q.b[i][ki] < 0]
    return _monomial_product(seed.cluster, into, vars) + _monomial_product(seed.cluster, outof, vars)


def mutate_seed(seed: Seed, k) -> Seed:
    Q = seed.quiver
    ki = Q.index(k)
    if ki >= Q.r:
        raise FrozenVertex(f"vertex {k} is frozen")
    num = exchange_numerator(seed, k)
    new = num.exact_div(seed.cluster[ki])
    cl = list(seed.cluster)
    cl[ki] = new
    return Seed(Q.mutate(k), tuple(cl))


def mutate_sequence(seed: Seed, seq) -> Seed:
    for k in seq:
        seed = mutate_seed(seed, k)
    return seed


# ---------------------------------------------------------------------------
# F-polynomials and g-vectors

def y_vars(Q: Quiver):
    return tuple(f"y{a}" for a in Q.mutable)


def x_vars(Q: Quiver):
    return tuple(f"x{a}" for a in Q.mutable)


def f_from_principal(z: LaurentPoly, Q: Quiver) -> LaurentPoly:
    """Set every x to 1 and return a polynomial in the y variables."""
    F = z.specialize({v: 1 for v in x_vars(Q)})
    return F.with_vars(y_vars(Q))


def g_from_principal(z: LaurentPoly, Q: Quiver) -> tuple:
    """Common multidegree with deg x_i = e_i and deg y_j = -(column j of B)."""
    r = Q.r
    xs = x_vars(Q)
    ys = y_vars(Q)
    xi = [z.vars.index(v) for v in xs]
    yi = [z.vars.index(v) for v in ys]
    degs = set()
    for e in z.terms:
        d = [e[xi[i]] for i in range(r)]
        for j in range(r):
            p = e[yi[j]]
            if p:
                for i in range(r):
                    d[i] -= p * Q.b[i][j]
        degs.add(tuple(d))
    if len(degs) != 1:
        raise NotHomogeneous(f"cluster variable has {len(degs)} different degrees")
    return degs.pop()


def principal_variable(Q: Quiver, seq, vertex) -> LaurentPoly:
    """Cluster variable at ``vertex`` after ``seq``, principal coefficients at Q."""
    Q = Q.mutable_part() if Q.r < Q.n else Q
    seed = mutate_sequence(principal_seed(Q), seq)
    return seed.variable(vertex)


def f_polynomial(Q: Quiver, seq, vertex) -> LaurentPoly:
    Qm = Q.mutable_part() if Q.r < Q.n else Q
    return f_from_principal(principal_variable(Qm, seq, vertex), Qm)


def g_vector(Q: Quiver, seq, vertex) -> tuple:
    Qm = Q.mutable_part() if Q.r < Q.n else Q
    return g_from_principal(principal_variable(Qm, seq, vertex), Qm)


def f_and_g(Q: Quiver, seq, vertex):
    Qm = Q.mutable_part() if Q.r < Q.n else Q
    z = principal_variable(Qm, seq, vertex)
    return f_from_principal(z, Qm), g_from_principal(z, Qm), z


def f_polynomial_fast(Q: Quiver, seq, vertex) -> LaurentPoly:
    """F-polynomial computed with x = 1 throughout (the y-part of the framing
    carries the coefficients).  Much smaller intermediate polynomials."""
    Qf = (Q.mutable_part() if Q.r < Q.n else Q).frame()
    ys = tuple(var_name(a) for a in Qf.labels[Qf.r:])
    cl = [LaurentPoly.one(ys) for _ in range(Qf.r)] + [LaurentPoly.var(ys, v) for v in ys]
    seed = Seed(Qf, tuple(cl))
    seed = mutate_sequence(seed, seq)
    return seed.variable(vertex)


def exchange_ratios(Q: Quiver) -> dict:
    """y-hat_j = prod over i of x_i^{b_ij}, as Laurent monomials in x."""
    names = tuple(var_name(a) for a in Q.labels)
    out = {}
    for j in range(Q.r):
        e = tuple(Q.b[i][j] for i in range(Q.n))
        out[Q.labels[j]] = LaurentPoly(names, {e: 1})
    return out


def g_f_expansion(Q: Quiver, F: LaurentPoly, g) -> LaurentPoly:
    """x^g F(y-hat) in the initial cluster of Q (coefficient free)."""
    Qm = Q.mutable_part() if Q.r < Q.n else Q
    names = x_vars(Qm)
    yh = exchange_ratios(Qm)
    sigma = {f"y{a}": yh[a] for a in Qm.mutable}
    img = F.substitute(sigma, target_vars=names)
    return img * LaurentPoly(names, {tuple(g): 1})


def d_vector(z: LaurentPoly, names) -> tuple:
    """Denominator vector: minus the lowest exponent of each named variable."""
    lo = z.min_exponents()
    return tuple(-lo[z.vars.index(v)] for v in names)


# ---------------------------------------------------------------------------
# graph-level verification

def verify_main_theorem(G, sequence=None, trace=None, depth_cap=12) -> Report:
    """F-polynomial and g-vector of the last reduction face versus D_G and h at the bottom."""
    from .dimer import dimer_face_polynomial, h_vector, minimal_matching
    from .graph_core import dual_quiver, find_reduction_sequence, replay_faces
    if sequence is None:
        sequence = find_reduction_sequence(G, depth_cap).faces
    else:
        replay_faces(G, sequence)
    Q = dual_quiver(G)
    D = dimer_face_polynomial(G)
    h0 = h_vector(G, minimal_matching(G))
    hvec = tuple(h0[f] for f in G.inner_faces)
    last = sequence[-1]
    F, g, z = f_and_g(Q, sequence, last)
    ok = (F == D) and (tuple(g) == hvec)
    rep = Report("main_theorem", ok, {"sequence": list(sequence), "F": F, "D": D,
                                      "g": list(g), "h0": list(hvec), "vertex": last})
    if not ok:
        raise MismatchReport("F-polynomial or g-vector disagrees with the dimer data", rep)
    return rep


def cluster_expansion(G):
    """z = sum over matchings of x^{h_M}, checked against x^g F(y-hat).

    Returns (z, d-vector, report).
    """
    from .dimer import dimer_face_polynomial, enumerate_matchings, h_vector, minimal_matching
    from .graph_core import dual_quiver
    Q = dual_quiver(G)
    names = x_vars(Q)
    faces = G.inner_faces
    terms = {}
    for M in enumerate_matchings(G):
        h = h_vector(G, M)
        key = tuple(h[f] for f in faces)
        terms[key] = terms.get(key, 0) + 1
    z = LaurentPoly(names, terms)
    h0 = h_vector(G, minimal_matching(G))
    other = g_f_expansion(Q, dimer_face_polynomial(G), [h0[f] for f in faces])
    d = d_vector(z, names)
    cleared = z.shift(d)
    no_factor = all(lo == 0 for lo in cleared.min_exponents())
    ok = (z == other) and all(x == 1 for x in d) and cleared.is_polynomial() and no_factor
    rep = Report("cluster_expansion", ok, {"z": z, "d": list(d), "gF": other,
                                           "cleared": cleared})
    if not ok:
        raise MismatchReport("cluster expansion check failed", rep)
    return z, d, rep


# ---------------------------------------------------------------------------
# adjacent seeds

def _y_mut_images(Q: Quiver, b, convention: str):
    """Images y_a' as (monomial exponent dict, power of (1 + y_b))."""
    out = {}
    for a in Q.mutable:
        if a == b:
            out[a] = ({b: -1}, 0)
            continue
        q = Q.arrows(a, b) if convention == "as_stated" else Q.arrows(b, a)
        if q >= 0:
            out[a] = ({a: 1}, q)
        else:
            # (1 + y_b^{-1})^q = y_b^{-q} (1 + y_b)^q
            out[a] = ({a: 1, b: -q}, q)
    return out


def _g_mut(Q: Quiver, b, g, convention):
    labels = Q.mutable
    gb = g[labels.index(b)]
    out = []
    for i, a in enumerate(labels):
        if a == b:
            out.append(-gb)
            continue
        q = Q.arrows(a, b) if convention == "as_stated" else Q.arrows(b, a)
        if q >= 0:
            out.append(g[i] + q * gb - q * min(0, gb))
        else:
            out.append(g[i] - q * min(0, gb))
    return tuple(out)


def _adjacent_sides(Q, b, F, g, F2, g2, convention):
    ys = y_vars(Q)
    labels = Q.mutable
    one_plus = LaurentPoly.one(ys) + LaurentPoly.var(ys, f"y{b}")
    imgs = _y_mut_images(Q, b, convention)
    gb = g[labels.index(b)]
    gb2 = g2[labels.index(b)]
    # F2 evaluated at y': each term becomes monomial * (1 + y_b)^k
    pieces = []
    for e, c in F2.terms.items():
        mono = [0] * len(ys)
        k = 0
        for i, a in enumerate(labels):
            p = e[i]
            if not p:
                continue
            m, q = imgs[a]
            for lab, x in m.items():
                mono[labels.index(lab)] += x * p
            k += q * p
        pieces.append((tuple(mono), c, k))
    # (1 + y_b')^m with y_b' = 1/y_b equals y_b^{-m} (1 + y_b)^m
    m2 = min(0, gb2)
    lo = min([k for _, _, k in pieces] + [0]) + m2
    K = max(0, -lo, -min(0, gb))
    lhs = F * one_plus ** (K + min(0, gb))
    rhs = LaurentPoly.zero(ys)
    shift = [0] * len(ys)
    shift[labels.index(b)] = -m2
    for mono, c, k in pieces:
        term = LaurentPoly(ys, {tuple(x + s for x, s in zip(mono, shift)): c})
        rhs = rhs + term * one_plus ** (k + m2 + K)
    return lhs, rhs


def adjacent_f_check(Q: Quiver, b, path, conventions=("as_stated", "transposed")) -> Report:
    """Compare F and g of the variable reached by ``path`` from Q with those
    of the same variable reached by ``(b, *path)`` from mu_b(Q)."""
    Qm = Q.mutable_part() if Q.r < Q.n else Q
    path = list(path)
    vertex = path[-1] if path else None
    if vertex is None:
        raise MismatchReport("adjacent check needs a nonempty path")
    F, g, _ = f_and_g(Qm, path, vertex)
    Q2 = Qm.mutate(b)
    F2, g2, _ = f_and_g(Q2, [b] + path, vertex)
    results = {}
    for conv in conventions:
        lhs, rhs = _adjacent_sides(Qm, b, F, g, F2, g2, conv)
        results[conv] = {"F": lhs == rhs, "g": _g_mut(Qm, b, g, conv) == tuple(g2)}
    ok = any(r["F"] and r["g"] for r in results.values())
    rep = Report("adjacent_F", ok, {"b": b, "path": path, "results": results,
                                    "g": list(g), "g_adjacent": list(g2)})
    return rep


# ---------------------------------------------------------------------------
# random walks

def random_quiver(r: int, rng: random.Random, max_mult: int = 1, density: float = 0.5) -> Quiver:
    b = [[0] * r for _ in range(r)]
    for i in range(r):
        for j in range(i + 1, r):
            if rng.random() < density:
                m = rng.randint(1, max_mult)
                if rng.random() < 0.5:
                    m = -m
                b[i][j] = m
                b[j][i] = -m
    return Quiver(list(range(1, r + 1)), b)


def random_mutation_walk(Q: Quiver, steps: int, rng: random.Random, principal: bool = True):
    """Random walk of seed mutations; returns (final seed, seed keys seen)."""
    seed = principal_seed(Q) if principal else initial_seed(Q)
    seen = {seed.key()}
    last = None
    for _ in range(steps):
        choices = [a for a in seed.quiver.mutable if a != last] or list(seed.quiver.mutable)
        k = rng.choice(choices)
        seed = mutate_seed(seed, k)
        seen.add(seed.key())
        last = k
    return seed, seen
