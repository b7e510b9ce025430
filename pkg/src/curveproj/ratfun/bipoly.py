"""Sparse bivariate polynomials in (t, s) over Q.

Keys are ``(deg_t, deg_s)``.  Many algorithms view a BiPoly as a polynomial
in s whose coefficients are univariate Polys in t (``coeffs_in_s``).
"""
from __future__ import annotations

import math
from fractions import Fraction

from ..errors import ZeroPolynomial
from . import modp
from .interp import interpolate
from .poly import Poly, as_rat, poly_gcd, poly_gcd_many, resultant, squarefree_poly


class BiPoly:
    __slots__ = ("terms", "_hash")

    def __init__(self, terms=None):
        d = {}
        if terms:
            for k, v in terms.items():
                v = as_rat(v)
                if v:
                    d[(int(k[0]), int(k[1]))] = v
        self.terms = d
        self._hash = None

    @classmethod
    def _raw(cls, d):
        b = object.__new__(cls)
        b.terms = d
        b._hash = None
        return b

    @classmethod
    def const(cls, c):
        return cls({(0, 0): c})

    @classmethod
    def t(cls):
        return cls({(1, 0): 1})

    @classmethod
    def s(cls):
        return cls({(0, 1): 1})

    @classmethod
    def from_poly_t(cls, p: Poly):
        return cls._raw({(i, 0): v for i, v in enumerate(p.coeffs) if v})

    @classmethod
    def from_poly_s(cls, p: Poly):
        return cls._raw({(0, j): v for j, v in enumerate(p.coeffs) if v})

    @classmethod
    def from_coeffs_in_s(cls, polys):
        d = {}
        for j, p in enumerate(polys):
            for i, v in enumerate(p.coeffs):
                if v:
                    d[(i, j)] = v
        return cls._raw(d)

    @classmethod
    def outer(cls, a: Poly, b: Poly):
        """a(t) * b(s)."""
        d = {}
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        d[(i, j)] = x * y
        return cls._raw(d)

    @classmethod
    def linear_in_s(cls, p: Poly, q: Poly):
        """G(t, s) = p(t) - s q(t)."""
        return cls.from_coeffs_in_s([p, -q])

    # -- properties
    def is_zero(self):
        return not self.terms

    @property
    def degree_t(self) -> int:
        return max((i for i, _ in self.terms), default=-1)

    @property
    def degree_s(self) -> int:
        return max((j for _, j in self.terms), default=-1)

    @property
    def total_degree(self) -> int:
        return max((i + j for i, j in self.terms), default=-1)

    def leading_key(self):
        """Leading monomial in graded-lex order with t > s."""
        return max(self.terms, key=lambda k: (k[0] + k[1], k[0]))

    def leading_coeff(self) -> Fraction:
        return self.terms[self.leading_key()] if self.terms else Fraction(0)

    def is_constant(self):
        return all(k == (0, 0) for k in self.terms)

    def __eq__(self, other):
        if isinstance(other, BiPoly):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == BiPoly.const(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __repr__(self):
        return f"BiPoly({self.pretty()})"

    # -- arithmetic
    def __neg__(self):
        return BiPoly._raw({k: -v for k, v in self.terms.items()})

    def __add__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        d = dict(self.terms)
        for k, v in other.terms.items():
            w = d.get(k, 0) + v
            if w:
                d[k] = w
            else:
                d.pop(k, None)
        return BiPoly._raw(d)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return BiPoly()
            return BiPoly._raw({k: v * other for k, v in self.terms.items()})
        other = _coerce(other)
        if other is None:
            return NotImplemented
        da, a = _int_terms(self.terms)
        db, b = _int_terms(other.terms)
        d = {}
        for (i, j), x in a.items():
            for (k, l), y in b.items():
                key = (i + k, j + l)
                d[key] = d.get(key, 0) + x * y
        den = da * db
        return BiPoly._raw({k: Fraction(v, den) for k, v in d.items() if v})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = BiPoly.const(1)
        for _ in range(n):
            out = out * self
        return out

    # -- evaluation and views
    def __call__(self, t, s):
        if isinstance(t, float) or isinstance(s, float):
            return sum(float(v) * t ** i * s ** j for (i, j), v in self.terms.items())
        t, s = as_rat(t), as_rat(s)
        return sum((v * t ** i * s ** j for (i, j), v in self.terms.items()), Fraction(0))

    def coeffs_in_s(self) -> list:
        """[c_0(t), c_1(t), ...] with self = sum c_j(t) s^j."""
        m = self.degree_s
        rows = [dict() for _ in range(m + 1)]
        for (i, j), v in self.terms.items():
            rows[j][i] = v
        out = []
        for r in rows:
            n = max(r, default=-1)
            out.append(Poly._raw([r.get(i, Fraction(0)) for i in range(n + 1)]))
        return out

    def coeffs_in_t(self) -> list:
        return self.swap().coeffs_in_s()

    def swap(self) -> "BiPoly":
        return BiPoly._raw({(j, i): v for (i, j), v in self.terms.items()})

    def eval_t(self, t0) -> Poly:
        """Univariate polynomial in s obtained by fixing t = t0."""
        t0 = as_rat(t0)
        m = self.degree_s
        acc = [Fraction(0)] * (m + 1)
        if t0.denominator == 1:
            x = t0.numerator
            # group by s-degree and use integer Horner per row
            for j, row in enumerate(self.coeffs_in_s()):
                acc[j] = row(x) if row.coeffs else Fraction(0)
            return Poly(acc)
        for j, row in enumerate(self.coeffs_in_s()):
            acc[j] = row(t0)
        return Poly(acc)

    def eval_s(self, s0) -> Poly:
        return self.swap().eval_t(s0)

    def lc_s(self) -> Poly:
        """Leading coefficient as a polynomial in s (a Poly in t)."""
        if not self.terms:
            return Poly()
        return self.coeffs_in_s()[-1]

    def diff_t(self) -> "BiPoly":
        return BiPoly._raw({(i - 1, j): v * i for (i, j), v in self.terms.items() if i})

    def diff_s(self) -> "BiPoly":
        return BiPoly._raw({(i, j - 1): v * j for (i, j), v in self.terms.items() if j})

    def shift_t(self, a) -> "BiPoly":
        """self(t + a, s)."""
        return BiPoly.from_coeffs_in_s([c.shift(a) for c in self.coeffs_in_s()])

    def subs_s_ratfun(self, p: Poly, q: Poly) -> Poly:
        """q^m * self(t, p/q) with m = deg_s."""
        cs = self.coeffs_in_s()
        m = len(cs) - 1
        acc = Poly()
        ppow = Poly.const(1)
        qpows = [Poly.const(1)]
        for _ in range(m):
            qpows.append(qpows[-1] * q)
        for j, c in enumerate(cs):
            if c.coeffs:
                acc = acc + c * ppow * qpows[m - j]
            ppow = ppow * p
        return acc

    # -- normal forms
    def int_form(self):
        return _int_terms(self.terms)

    def primitive(self) -> "BiPoly":
        if not self.terms:
            return self
        _, d = _int_terms(self.terms)
        g = 0
        for v in d.values():
            g = math.gcd(g, v)
            if g == 1:
                break
        return BiPoly._raw({k: Fraction(v // g) for k, v in d.items()})

    def normalized(self) -> "BiPoly":
        """Primitive, with positive leading coefficient in graded-lex t > s."""
        if not self.terms:
            return self
        p = self.primitive()
        if p.leading_coeff() < 0:
            p = -p
        return p

    def content_t(self) -> Poly:
        """Monic gcd of the s-coefficients: the factor depending on t only."""
        return poly_gcd_many(self.coeffs_in_s())

    def content_s(self) -> Poly:
        """Monic factor depending on s only."""
        return poly_gcd_many(self.coeffs_in_t())

    def div_poly_t(self, c: Poly) -> "BiPoly":
        return BiPoly.from_coeffs_in_s([r.exact_div(c) if r.coeffs else r for r in self.coeffs_in_s()])

    def div_poly_s(self, c: Poly) -> "BiPoly":
        return self.swap().div_poly_t(c).swap()

    def to_float_rows(self):
        """Rows indexed by s-degree of float coefficient lists in t (ascending)."""
        return [[float(v) for v in c.coeffs] for c in self.coeffs_in_s()]

    def pretty(self, tv: str = "t", sv: str = "s") -> str:
        if not self.terms:
            return "0"
        keys = sorted(self.terms, key=lambda k: (k[0] + k[1], k[0]), reverse=True)
        out = ""
        for n, (i, j) in enumerate(keys):
            v = self.terms[(i, j)]
            sign = "-" if v < 0 else "+"
            a = -v if v < 0 else v
            mono = []
            if i:
                mono.append(tv if i == 1 else f"{tv}^{i}")
            if j:
                mono.append(sv if j == 1 else f"{sv}^{j}")
            mstr = "*".join(mono)
            astr = str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"
            if not mstr:
                body = astr
            elif a == 1:
                body = mstr
            else:
                body = f"{astr}*{mstr}"
            if n == 0:
                out = ("-" if sign == "-" else "") + body
            else:
                out += sign + body
        return out


def _coerce(v):
    if isinstance(v, BiPoly):
        return v
    if isinstance(v, (int, Fraction)):
        return BiPoly.const(v)
    return None


def _int_terms(terms):
    den = 1
    for v in terms.values():
        den = den * v.denominator // math.gcd(den, v.denominator)
    return den, {k: v.numerator * (den // v.denominator) for k, v in terms.items()}


# ---------------------------------------------------------------------------
# division


def bipoly_divide(a: BiPoly, g: BiPoly):
    """Exact quotient a / g, or None when g does not divide a.

    Division in Q(t)[s]; every step must divide exactly in Q[t].
    """
    if g.is_zero():
        raise ZeroDivisionError("division by the zero bivariate polynomial")
    if a.is_zero():
        return BiPoly()
    A = a.coeffs_in_s()
    G = g.coeffs_in_s()
    m = len(G) - 1
    lg = G[m]
    n = len(A) - 1
    if n < m:
        return None
    Q = [Poly()] * (n - m + 1)
    for k in range(n - m, -1, -1):
        top = A[k + m]
        if top.is_zero():
            continue
        c, r = divmod(top, lg)
        if not r.is_zero():
            return None
        Q[k] = c
        for i in range(m + 1):
            if G[i].coeffs:
                A[k + i] = A[k + i] - c * G[i]
    if any(not A[i].is_zero() for i in range(m)):
        return None
    return BiPoly.from_coeffs_in_s(Q)


def divides(g: BiPoly, a: BiPoly) -> bool:
    return bipoly_divide(a, g) is not None


# ---------------------------------------------------------------------------
# gcd


def _strip_contents(a: BiPoly):
    ct = a.content_t()
    a1 = a.div_poly_t(ct) if ct.degree > 0 else a
    cs = a1.content_s()
    a2 = a1.div_poly_s(cs) if cs.degree > 0 else a1
    return ct, cs, a2


def bipoly_gcd(a: BiPoly, b: BiPoly) -> BiPoly:
    """Normalized gcd of two bivariate polynomials.

    Contents in t and in s are handled univariately; the mixed part is found
    by evaluating t at integers, taking univariate gcds, interpolating, and
    confirming by exact division.
    """
    if a.is_zero():
        return b.normalized()
    if b.is_zero():
        return a.normalized()
    cta, csa, A = _strip_contents(a)
    ctb, csb, B = _strip_contents(b)
    ct = poly_gcd(cta, ctb)
    cs = poly_gcd(csa, csb)
    G = _mixed_gcd(A, B)
    out = BiPoly.from_poly_t(ct) * BiPoly.from_poly_s(cs) * G
    return out.normalized()


def _mixed_gcd(A: BiPoly, B: BiPoly) -> BiPoly:
    # A, B have no factor depending on only one variable
    if A.degree_s < 1 or B.degree_s < 1:
        return BiPoly.const(1)
    if A.degree_t < 1 and B.degree_t < 1:
        return BiPoly.const(1)
    la, lb = A.lc_s(), B.lc_s()
    gamma = poly_gcd(la, lb)
    bound = gamma.degree + min(A.degree_t, B.degree_t) + 1
    pts, vals, dmin = [], [], None
    x = 0
    while True:
        while len(pts) < bound:
            x += 1
            if la(x) == 0 or lb(x) == 0:
                continue
            g = poly_gcd(A.eval_t(x), B.eval_t(x))
            d = g.degree
            if d == 0:
                return BiPoly.const(1)
            if dmin is None or d < dmin:
                dmin, pts, vals = d, [], []
            if d > dmin:
                continue
            pts.append(x)
            vals.append(g * gamma(x))
        # interpolate each s-coefficient
        rows = []
        for j in range(dmin + 1):
            rows.append(interpolate(pts, [v.coeff(j) for v in vals]))
        H = BiPoly.from_coeffs_in_s(rows)
        ch = H.content_t()
        if ch.degree > 0:
            H = H.div_poly_t(ch)
        H = H.normalized()
        if bipoly_divide(A, H) is not None and bipoly_divide(B, H) is not None:
            return H
        # unlucky points all shared a too-large degree; widen
        bound += 1


def bipoly_gcd_many(polys) -> BiPoly:
    polys = sorted((p for p in polys if not p.is_zero()), key=lambda p: (p.total_degree, len(p.terms)))
    if not polys:
        return BiPoly()
    g = polys[0].normalized()
    for p in polys[1:]:
        if g.is_constant():
            break
        g = bipoly_gcd(g, p)
    return g


# ---------------------------------------------------------------------------
# square-free part


def squarefree_in_s_modp(F: BiPoly):
    """True when a modular image proves F has no repeated factor of positive s-degree.

    None means the test was inconclusive (not a proof of the opposite).
    """
    m = F.degree_s
    if m < 1:
        return True
    den, d = F.int_form()
    rows = [[] for _ in range(m + 1)]
    degt = F.degree_t
    for j in range(m + 1):
        rows[j] = [0] * (degt + 1)
    for (i, j), v in d.items():
        rows[j][i] = v
    for p in modp.PRIMES[:2]:
        attempts = 0
        for t0 in range(1, 40):
            if modp.evaluate(rows[m], t0, p) == 0:
                continue
            f = modp.trim([modp.evaluate(r, t0, p) for r in rows])
            g = modp.gcd(f, modp.deriv(f, p), p)
            if len(g) == 1:
                return True
            attempts += 1
            if attempts == 3:
                break
    return None


def squarefree_part(f: BiPoly) -> BiPoly:
    """Product of the distinct irreducible factors of f, normalized."""
    if f.is_zero():
        raise ZeroPolynomial("square-free part of the zero polynomial")
    if f.is_constant():
        return BiPoly.const(1)
    ct, cs, F = _strip_contents(f)
    out = F
    if F.degree_s >= 1 and squarefree_in_s_modp(F) is not True:
        G = bipoly_gcd(F, F.diff_s())
        if not G.is_constant():
            out = bipoly_divide(F, G)
    if ct.degree > 0:
        out = out * BiPoly.from_poly_t(squarefree_poly(ct))
    if cs.degree > 0:
        out = out * BiPoly.from_poly_s(squarefree_poly(cs))
    return out.normalized()


def is_squarefree(f: BiPoly) -> bool:
    g = squarefree_part(f)
    return g.degree_t == f.degree_t and g.degree_s == f.degree_s


# ---------------------------------------------------------------------------
# elimination


def resultant_in_s(A: BiPoly, B: BiPoly) -> Poly:
    """Res_s(A, B) as a polynomial in t, by evaluation and interpolation."""
    if A.is_zero() or B.is_zero():
        return Poly()
    if A.degree_s == 0:
        return A.eval_s(0) ** B.degree_s
    if B.degree_s == 0:
        return B.eval_s(0) ** A.degree_s
    bound = A.degree_t * B.degree_s + B.degree_t * A.degree_s
    xs, ys = [], []
    k = 0
    lcA, lcB = A.lc_s(), B.lc_s()
    while len(xs) < bound + 1:
        t0 = Fraction(k)
        k += 1
        if lcA(t0) == 0 or lcB(t0) == 0:
            continue
        xs.append(t0)
        ys.append(resultant(A.eval_t(t0), B.eval_t(t0)))
    return interpolate(xs, ys)
