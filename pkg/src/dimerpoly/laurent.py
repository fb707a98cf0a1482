"""Sparse multivariate Laurent polynomials with integer coefficients.

A polynomial is a mapping from exponent tuples to nonzero Python ints, tied to
an ordered tuple of variable names.  Arithmetic is exact; there is no floating
point anywhere in this module.
"""
from __future__ import annotations

import re
from typing import Iterable, Mapping

from .errors import NonUnitInverse, NotDivisible, VarTableMismatch

Exponent = tuple


class LaurentPoly:
    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, vars: Iterable[str], terms: Mapping[tuple, int] | None = None):
        self.vars = tuple(vars)
        if len(set(self.vars)) != len(self.vars):
            raise VarTableMismatch(f"duplicate variable names in {self.vars}")
        clean = {}
        n = len(self.vars)
        if terms:
            for e, c in terms.items():
                if c:
                    e = tuple(e)
                    if len(e) != n:
                        raise VarTableMismatch(f"exponent {e} does not fit {self.vars}")
                    clean[e] = c
        self.terms = clean
        self._hash = None

    # -- constructors -------------------------------------------------------
    @classmethod
    def zero(cls, vars):
        return cls(vars)

    @classmethod
    def const(cls, vars, c: int):
        vars = tuple(vars)
        return cls(vars, {(0,) * len(vars): c})

    @classmethod
    def one(cls, vars):
        return cls.const(vars, 1)

    @classmethod
    def var(cls, vars, name: str, power: int = 1):
        vars = tuple(vars)
        e = [0] * len(vars)
        e[vars.index(name)] = power
        return cls(vars, {tuple(e): 1})

    @classmethod
    def monomial(cls, vars, exps, coeff: int = 1):
        """Monomial from an exponent sequence or a {name: power} mapping."""
        vars = tuple(vars)
        if isinstance(exps, Mapping):
            e = [0] * len(vars)
            for k, v in exps.items():
                e[vars.index(k)] += v
            exps = e
        return cls(vars, {tuple(exps): coeff})

    # -- basic queries ------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def is_unit(self) -> bool:
        return len(self.terms) == 1 and abs(next(iter(self.terms.values()))) == 1

    def nterms(self) -> int:
        return len(self.terms)

    def coefficients(self):
        return list(self.terms.values())

    def coeff(self, exps) -> int:
        return self.terms.get(tuple(exps), 0)

    def min_exponents(self):
        if not self.terms:
            return (0,) * len(self.vars)
        return tuple(min(e[i] for e in self.terms) for i in range(len(self.vars)))

    def max_exponents(self):
        if not self.terms:
            return (0,) * len(self.vars)
        return tuple(max(e[i] for e in self.terms) for i in range(len(self.vars)))

    def is_polynomial(self) -> bool:
        return all(x >= 0 for x in self.min_exponents())

    def _check(self, other):
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly.const(self.vars, int(other))
        if other.vars != self.vars:
            raise VarTableMismatch(f"{self.vars} vs {other.vars}")
        return other

    # -- ring operations ----------------------------------------------------
    def __add__(self, other):
        other = self._check(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = t.get(e, 0) + c
        return LaurentPoly(self.vars, t)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        if isinstance(other, int):
            return LaurentPoly(self.vars, {e: c * other for e, c in self.terms.items()})
        other = self._check(other)
        t: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = t.get(e, 0) + c1 * c2
        return LaurentPoly(self.vars, t)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse_unit() ** (-k)
        result = LaurentPoly.one(self.vars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def inverse_unit(self):
        if not self.is_monomial():
            raise NonUnitInverse(f"cannot invert {self}")
        (e, c), = self.terms.items()
        if c not in (1, -1):
            raise NonUnitInverse(f"cannot invert {self} over the integers")
        return LaurentPoly(self.vars, {tuple(-x for x in e): c})

    def shift(self, exps):
        """Multiply by the monomial with exponent vector ``exps``."""
        return LaurentPoly(self.vars, {tuple(a + b for a, b in zip(e, exps)): c
                                       for e, c in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.const(self.vars, other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self.terms.items())))
        return self._hash

    # -- division -----------------------------------------------------------
    def exact_div(self, q: "LaurentPoly") -> "LaurentPoly":
        q = self._check(q)
        if q.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if self.is_zero():
            return LaurentPoly.zero(self.vars)
        if q.is_monomial():
            (e, c), = q.terms.items()
            out = {}
            for e1, c1 in self.terms.items():
                if c1 % c:
                    raise NotDivisible(f"coefficient {c1} not divisible by {c}")
                out[tuple(a - b for a, b in zip(e1, e))] = c1 // c
            return LaurentPoly(self.vars, out)
        # strip monomial content, then polynomial long division in lex order
        mp, mq = self.min_exponents(), q.min_exponents()
        p0 = self.shift(tuple(-x for x in mp))
        q0 = q.shift(tuple(-x for x in mq))
        lq = max(q0.terms)
        lc = q0.terms[lq]
        rem = dict(p0.terms)
        quot: dict = {}
        while rem:
            lr = max(rem)
            d = tuple(a - b for a, b in zip(lr, lq))
            if min(d) < 0 or rem[lr] % lc:
                raise NotDivisible(f"{self} is not divisible by {q}")
            c = rem[lr] // lc
            quot[d] = c
            for e, cq in q0.terms.items():
                k = tuple(a + b for a, b in zip(e, d))
                v = rem.get(k, 0) - c * cq
                if v:
                    rem[k] = v
                else:
                    rem.pop(k, None)
        shift = tuple(a - b for a, b in zip(mp, mq))
        return LaurentPoly(self.vars, quot).shift(shift)

    def divides(self, p: "LaurentPoly") -> bool:
        try:
            p.exact_div(self)
        except NotDivisible:
            return False
        return True

    # -- variable handling --------------------------------------------------
    def with_vars(self, new_vars) -> "LaurentPoly":
        """Re-express in a variable table containing every variable in use."""
        new_vars = tuple(new_vars)
        idx = {v: i for i, v in enumerate(new_vars)}
        used = [i for i in range(len(self.vars)) if any(e[i] for e in self.terms)]
        for i in used:
            if self.vars[i] not in idx:
                raise VarTableMismatch(f"variable {self.vars[i]} missing from {new_vars}")
        out = {}
        for e, c in self.terms.items():
            ne = [0] * len(new_vars)
            for i in used:
                ne[idx[self.vars[i]]] = e[i]
            out[tuple(ne)] = c
        return LaurentPoly(new_vars, out)

    def rename(self, mapping: Mapping[str, str]) -> "LaurentPoly":
        return LaurentPoly(tuple(mapping.get(v, v) for v in self.vars), self.terms)

    def used_vars(self):
        return tuple(v for i, v in enumerate(self.vars) if any(e[i] for e in self.terms))

    def specialize(self, values: Mapping[str, int]) -> "LaurentPoly":
        """Set some variables to integer units (1 or -1); keeps the table."""
        idx = [(self.vars.index(k), v) for k, v in values.items()]
        out: dict = {}
        for e, c in self.terms.items():
            e = list(e)
            for i, v in idx:
                if e[i] < 0 and v not in (1, -1):
                    raise NonUnitInverse(f"cannot set {self.vars[i]}={v} under a negative power")
                c = c * (v ** abs(e[i]) if e[i] >= 0 else v ** (-e[i]))
                e[i] = 0
            e = tuple(e)
            out[e] = out.get(e, 0) + c
        return LaurentPoly(self.vars, out)

    def substitute(self, sigma: Mapping[str, "LaurentPoly | int"], target_vars=None,
                   clearing: "LaurentPoly | None" = None) -> "LaurentPoly":
        """Image under a substitution of variables.

        Variables not in ``sigma`` map to themselves (they must exist in the
        target table).  A negative power of a non-unit image is handled by
        multiplying through by the common denominator and dividing exactly at
        the end; ``clearing`` is multiplied in before that division.
        """
        if target_vars is None:
            for v in sigma.values():
                if isinstance(v, LaurentPoly):
                    target_vars = v.vars
                    break
            else:
                target_vars = self.vars
        target_vars = tuple(target_vars)
        images = []
        for name in self.vars:
            if name in sigma:
                img = sigma[name]
                if not isinstance(img, LaurentPoly):
                    img = LaurentPoly.const(target_vars, int(img))
                elif img.vars != target_vars:
                    img = img.with_vars(target_vars)
            else:
                img = LaurentPoly.var(target_vars, name)
            images.append(img)
        n = len(self.vars)
        # powers of non-unit images that appear with negative exponent
        denom_pow = [0] * n
        for e in self.terms:
            for i in range(n):
                if e[i] < 0 and not images[i].is_unit():
                    denom_pow[i] = max(denom_pow[i], -e[i])
        cache: dict = {}

        def power(i, k):
            key = (i, k)
            if key not in cache:
                cache[key] = images[i] ** k
            return cache[key]

        total = LaurentPoly.zero(target_vars)
        for e, c in self.terms.items():
            term = LaurentPoly.const(target_vars, c)
            for i in range(n):
                k = e[i] + denom_pow[i]
                if k:
                    term = term * power(i, k)
            total = total + term
        if clearing is not None:
            total = total * clearing.with_vars(target_vars)
        denom = LaurentPoly.one(target_vars)
        for i in range(n):
            if denom_pow[i]:
                denom = denom * power(i, denom_pow[i])
        if denom.is_unit():
            return total * denom.inverse_unit()
        try:
            return total.exact_div(denom)
        except NotDivisible as exc:
            raise NonUnitInverse(f"substitution leaves a non-Laurent quotient: {exc}") from exc

    # -- display ------------------------------------------------------------
    def sorted_terms(self):
        """Terms in graded-lex order: by total degree, ties by lex descending."""
        return sorted(self.terms.items(), key=lambda ec: (sum(ec[0]), tuple(-x for x in ec[0])))

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for k, (e, c) in enumerate(self.sorted_terms()):
            mono = []
            for name, x in zip(self.vars, e):
                if x == 1:
                    mono.append(name)
                elif x:
                    mono.append(f"{name}^{x}")
            body = "*".join(mono)
            a = abs(c)
            if not body:
                s = str(a)
            elif a == 1:
                s = body
            else:
                s = f"{a}*{body}"
            if k == 0:
                pieces.append(("-" if c < 0 else "") + s)
            else:
                pieces.append(("- " if c < 0 else "+ ") + s)
        return " ".join(pieces)

    __str__ = to_text

    def __repr__(self):
        return f"LaurentPoly({self.to_text()!r}, vars={self.vars})"

    def to_json(self):
        return {"vars": list(self.vars),
                "terms": [[list(e), c] for e, c in self.sorted_terms()],
                "text": self.to_text()}

    @classmethod
    def from_json(cls, obj):
        return cls(obj["vars"], {tuple(e): c for e, c in obj["terms"]})


_FACTOR = re.compile(r"^([A-Za-z_][A-Za-z_0-9]*)(?:\^(-?\d+))?$")


def parse(text: str, vars) -> LaurentPoly:
    """Inverse of ``LaurentPoly.to_text`` for the given variable table."""
    vars = tuple(vars)
    idx = {v: i for i, v in enumerate(vars)}
    s = text.strip()
    if s == "0":
        return LaurentPoly.zero(vars)
    # split at top-level + or - that are not part of an exponent (^-2)
    terms = []
    buf = ""
    sign = 1
    i = 0
    while i < len(s):
        ch = s[i]
        if ch in "+-" and (i == 0 or s[i - 1] != "^"):
            if buf.strip():
                terms.append((sign, buf.strip()))
            buf = ""
            sign = 1 if ch == "+" else -1
        else:
            buf += ch
        i += 1
    if buf.strip():
        terms.append((sign, buf.strip()))
    out: dict = {}
    for sign, body in terms:
        coeff = sign
        e = [0] * len(vars)
        for factor in body.split("*"):
            factor = factor.strip()
            if re.fullmatch(r"\d+", factor):
                coeff *= int(factor)
                continue
            m = _FACTOR.match(factor)
            if not m or m.group(1) not in idx:
                raise ValueError(f"cannot parse factor {factor!r} in {text!r}")
            e[idx[m.group(1)]] += int(m.group(2)) if m.group(2) else 1
        e = tuple(e)
        out[e] = out.get(e, 0) + coeff
    return LaurentPoly(vars, out)


def add(p, q):
    return p + q


def mul(p, q):
    return p * q


def exact_div(p, q):
    return p.exact_div(q)


def substitute(p, sigma, target_vars=None, clearing=None):
    return p.substitute(sigma, target_vars=target_vars, clearing=clearing)


def newton_support(p: LaurentPoly) -> set:
    return set(p.terms)


def equal_up_to_unit(p: LaurentPoly, q: LaurentPoly, var: str = "t"):
    """Return (equal, sign, k) with p = sign * var^k * q when such a unit exists.

    Both inputs must be univariate in ``var`` (other variables absent).
    """
    for r in (p, q):
        for v in r.used_vars():
            if v != var:
                raise VarTableMismatch(f"{r} is not univariate in {var}")
    if q.vars != p.vars:
        q = q.with_vars(p.vars) if set(q.used_vars()) <= set(p.vars) else q
    if p.is_zero() or q.is_zero():
        return (p.is_zero() and q.is_zero(), 1, 0)
    i = p.vars.index(var)
    j = q.vars.index(var)
    lo_p = min(e[i] for e in p.terms)
    lo_q = min(e[j] for e in q.terms)
    k = lo_p - lo_q
    cp = p.terms[min(p.terms, key=lambda e: e[i])]
    cq = q.terms[min(q.terms, key=lambda e: e[j])]
    if abs(cp) != abs(cq):
        return (False, 1, 0)
    sign = 1 if cp == cq else -1
    shifted = {}
    for e, c in q.terms.items():
        shifted[e[j] + k] = sign * c
    mine = {e[i]: c for e, c in p.terms.items()}
    if shifted == mine:
        return (True, sign, k)
    return (False, 1, 0)


def unit_text(sign: int, k: int, var: str = "t") -> str:
    s = "-" if sign < 0 else "+"
    return f"{s}{var}^{k}"
