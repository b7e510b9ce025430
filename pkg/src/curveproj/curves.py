"""Rational space curves and the single-curve predicates the detector needs."""
from __future__ import annotations

from fractions import Fraction
from functools import cached_property
from math import gcd, lcm

import numpy as np

from .errors import DegenerateCurve, ImproperParametrization, NotPlanar
from .geometry import Plane, ProjPoint, nullspace
from .ratfun import BiPoly, Poly, RatFun, as_rat, bipoly_divide, poly_gcd, poly_gcd_many, resultant_in_s, squarefree_poly
from .ratfun.poly import lcm_many

# fixed probe parameters for the tracing index; any three generic values work
_TRACE_PROBES = (Fraction(3, 11), Fraction(-7, 13), Fraction(17, 5), Fraction(-23, 9), Fraction(41, 19))


class CurveParam:
    """x(t) = (x(t), y(t), z(t)) with rational components in one variable."""

    def __init__(self, x, y, z, variable: str = "t", label: str = ""):
        comps = []
        for c in (x, y, z):
            if isinstance(c, Poly):
                c = RatFun.from_poly(c)
            elif not isinstance(c, RatFun):
                c = RatFun.const(c)
            comps.append(c)
        if all(c.is_constant() for c in comps):
            raise DegenerateCurve("all three components are constant; the curve is a point")
        self.x, self.y, self.z = comps
        self.variable = variable
        self.label = label

    @property
    def components(self):
        return (self.x, self.y, self.z)

    @cached_property
    def _proj(self):
        W = lcm_many([c.den for c in self.components])
        tup = [c.num * (W // c.den) for c in self.components] + [W]
        # common integer scale: coprime integer coefficients, W with positive lc
        dens = [v.denominator for p in tup for v in p.coeffs]
        L = lcm(*dens) if dens else 1
        nums = [int(v * L) for p in tup for v in p.coeffs]
        g = 0
        for v in nums:
            g = gcd(g, v)
        scale = Fraction(L, g or 1)
        if W.lc < 0:
            scale = -scale
        return tuple(p * scale for p in tup)

    def projective(self):
        """Coprime polynomial tuple (X, Y, Z, W) with x = X/W etc."""
        return self._proj

    @property
    def degree(self) -> int:
        return max(p.degree for p in self._proj)

    def __call__(self, t):
        return tuple(c(t) for c in self.components)

    def homogeneous_at(self, t):
        return tuple(p(as_rat(t)) for p in self._proj)

    def point(self, t) -> ProjPoint:
        return ProjPoint(self.homogeneous_at(t))

    @cached_property
    def _float_proj(self):
        return [np.asarray(p.to_float_coeffs()[::-1], dtype=float) for p in self._proj]

    def eval_float(self, t):
        """Affine points for an array of parameters, shape (n, 3); poles give inf/nan."""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        X, Y, Z, W = (np.polyval(c, t) for c in self._float_proj)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.stack([X / W, Y / W, Z / W], axis=-1)

    def eval_hom_float(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        return np.stack([np.polyval(c, t) for c in self._float_proj], axis=-1)

    def derivative(self):
        return tuple(c.deriv() for c in self.components)

    def compose(self, m: RatFun) -> "CurveParam":
        """Reparametrize: t -> x(m(t))."""
        return CurveParam(*(c.compose(m) for c in self.components), variable=self.variable, label=self.label)

    def poles(self) -> Poly:
        return self._proj[3]

    def pretty(self):
        v = self.variable
        return tuple(c.pretty(v) for c in self.components)

    def to_doc(self) -> dict:
        x, y, z = self.pretty()
        return {"variable": self.variable, "x": x, "y": y, "z": z, "label": self.label}

    def same_param(self, other: "CurveParam") -> bool:
        return self.components == other.components

    def __repr__(self):
        x, y, z = self.pretty()
        return f"CurveParam({x}, {y}, {z})"


def _coeff_matrix(c: CurveParam):
    X = c.projective()
    n = max(p.degree for p in X)
    return [[p.coeff(k) for p in X] for k in range(n + 1)]


def plane_of_curve(c: CurveParam):
    """Return (plane, is_line).  For a line, some plane through it is returned."""
    if all(comp.is_constant() for comp in c.components):
        raise DegenerateCurve("the curve is a point")
    ker = nullspace(_coeff_matrix(c))
    if not ker:
        raise NotPlanar("the curve is not contained in a plane")
    if len(ker) >= 3:
        raise DegenerateCurve("the curve is a point")
    # kernel vectors never have A=B=C=0 because W is not identically zero
    return Plane(*ker[0]), len(ker) == 2


def is_line(c: CurveParam) -> bool:
    try:
        return plane_of_curve(c)[1]
    except NotPlanar:
        return False


def point_at_infinity(c: CurveParam) -> ProjPoint:
    X = c.projective()
    n = max(p.degree for p in X)
    return ProjPoint([p.coeff(n) for p in X])


def _minor_gcd(X, t0):
    vals = [p(t0) for p in X]
    minors = []
    for i in range(4):
        for j in range(i + 1, 4):
            m = X[i] * vals[j] - X[j] * vals[i]
            if not m.is_zero():
                minors.append(m)
    if not minors:
        return None
    return poly_gcd_many(minors)


def fiber_poly(c: CurveParam, t0) -> Poly:
    """Monic polynomial in s whose roots are the finite s with x(s) = x(t0)."""
    g = _minor_gcd(c.projective(), as_rat(t0))
    if g is None:
        raise DegenerateCurve("the curve is a point")
    return g


def tracing_index(c: CurveParam) -> int:
    """Generic number of parameter values over one curve point (1 = proper)."""
    X = c.projective()
    best = None
    for t0 in _TRACE_PROBES:
        if X[3](t0) == 0:
            continue
        g = _minor_gcd(X, t0)
        if g is None:
            raise DegenerateCurve("the curve is a point")
        best = g.degree if best is None else min(best, g.degree)
        if best == 1:
            break
    return best


def _bivariate_diff_quotients(X):
    """(X_i(s)X_j(u) - X_j(s)X_i(u)) / (s - u) as BiPolys in (s, u) -> keys (s, u)."""
    out = []
    for i in range(4):
        for j in range(i + 1, 4):
            d = BiPoly.outer(X[i], X[j]) - BiPoly.outer(X[j], X[i])
            if d.is_zero():
                continue
            q = bipoly_divide(d, BiPoly.t() - BiPoly.s())
            out.append(q)
    return out


def self_intersection_params(c: CurveParam) -> Poly:
    """Squarefree S(s) vanishing at every parameter of a multiple point.

    Covers pairs of finite parameters and points hit again at the parameter
    at infinity.  Cusps may contribute spurious roots.
    """
    if tracing_index(c) != 1:
        raise ImproperParametrization("the parametrization is not proper")
    X = c.projective()
    E = _bivariate_diff_quotients(X)
    E = [e for e in E if not e.is_zero()]
    S = Poly.const(1)
    nonconst = [e for e in E if not e.is_constant()]
    if len(E) != len(nonconst):
        # some quotient is a nonzero constant: no finite pair can collide
        E = []
    if E:
        # resultants of fixed integer combinations; each root set contains the
        # true one, and the gcd of two of them drops most spurious roots
        combos = []
        for w in ((1, 2, 3, 5, 7, 11), (3, -1, 4, -1, 5, -9), (2, 7, -1, 8, -2, 8)):
            acc = BiPoly()
            for k, e in enumerate(E):
                acc = acc + e * w[k % len(w)] * (1 + k // len(w))
            combos.append(acc)
        R1 = resultant_in_s(combos[0], combos[1])
        R2 = resultant_in_s(combos[0], combos[2])
        if R1.is_zero() or R2.is_zero():
            R = R1 if not R1.is_zero() else R2
        else:
            R = poly_gcd(R1, R2)
        S = S * R
    # parameters whose point is also the point at infinity
    n = max(p.degree for p in X)
    L = [p.coeff(n) for p in X]
    inf_minors = []
    for i in range(4):
        for j in range(i + 1, 4):
            m = X[i] * L[j] - X[j] * L[i]
            if not m.is_zero():
                inf_minors.append(m)
    if inf_minors:
        g = poly_gcd_many(inf_minors)
        if g.degree > 0:
            S = S * g
    if S.is_zero():
        raise ImproperParametrization("difference quotients share a component")
    return squarefree_poly(S) if S.degree > 0 else Poly.const(1)
