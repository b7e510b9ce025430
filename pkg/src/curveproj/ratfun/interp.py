"""Polynomial interpolation and rational reconstruction over Q.

``rational_reconstruct`` is the extended-Euclidean core shared by
``ratfun_reconstruct`` (values at points) and ``pade`` (power series).
"""
from __future__ import annotations

from fractions import Fraction

from ..errors import DuplicateAbscissa, NoFit
from .poly import Poly, RatFun, as_rat


def interpolate(xs, ys) -> Poly:
    """Newton divided differences; returns the polynomial of degree < len(xs)."""
    xs = [as_rat(x) for x in xs]
    ys = [as_rat(y) for y in ys]
    if len(set(xs)) != len(xs):
        raise DuplicateAbscissa("interpolation abscissas must be distinct")
    n = len(xs)
    coef = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    # expand the Newton form
    p = Poly()
    for i in range(n - 1, -1, -1):
        p = p * Poly([-xs[i], 1]) + Poly([coef[i]])
    return p


def rational_reconstruct(m: Poly, u: Poly, num_bound: int, den_bound: int):
    """Find r/q with r = q*u mod m, deg r <= num_bound, deg q <= den_bound.

    Runs the extended Euclidean algorithm on (m, u) and stops at the first
    remainder of degree <= num_bound.  Returns (r, q) or None.
    """
    r0, r1 = m, u % m
    q0, q1 = Poly(), Poly.const(1)
    while r1.degree > num_bound:
        if r1.is_zero():
            break
        quo, rem = divmod(r0, r1)
        r0, r1 = r1, rem
        q0, q1 = q1, q0 - quo * q1
    if q1.is_zero() or q1.degree > den_bound:
        return None
    return r1, q1


def ratfun_reconstruct(samples, degree_bound: int) -> RatFun:
    """The rational function of degree <= degree_bound through all samples.

    Needs at least 2*degree_bound + 2 samples at distinct abscissas.  Raises
    NoFit when no such function exists; the result re-evaluates exactly on
    every sample.
    """
    if degree_bound < 1:
        raise ValueError("degree_bound must be at least 1")
    pts = [(as_rat(t), as_rat(s)) for t, s in samples]
    ts = [t for t, _ in pts]
    if len(set(ts)) != len(ts):
        raise DuplicateAbscissa("two samples share an abscissa")
    if len(pts) < 2 * degree_bound + 2:
        raise ValueError(f"need at least {2 * degree_bound + 2} samples")
    m = Poly.const(1)
    for t in ts:
        m = m * Poly([-t, 1])
    u = interpolate(ts, [s for _, s in pts])
    out = rational_reconstruct(m, u, degree_bound, degree_bound)
    if out is None:
        raise NoFit("no rational function within the degree bound")
    r, q = out
    for t, s in pts:
        qt = q(t)
        if qt == 0 or r(t) / qt != s:
            raise NoFit("reconstruction does not interpolate the samples")
    f = RatFun(r, q)
    if f.degree > degree_bound:
        raise NoFit("reconstruction exceeds the degree bound")
    return f


def pade(series, num_bound: int, den_bound: int):
    """Pade approximant p/q of a truncated power series (ascending coefficients).

    Returns RatFun or None when the EEA does not produce q with q(0) != 0.
    """
    n = len(series)
    m = Poly([0] * n + [1])
    out = rational_reconstruct(m, Poly(series), num_bound, den_bound)
    if out is None:
        return None
    r, q = out
    if q.coeff(0) == 0:
        return None
    return RatFun(r, q)


# -- truncated power series with Fraction coefficients


def series_mul(a, b, n):
    out = [Fraction(0)] * n
    for i, x in enumerate(a[:n]):
        if x:
            for j in range(min(len(b), n - i)):
                out[i + j] += x * b[j]
    return out


def series_inv(a, n):
    """1/a mod x^n by Newton iteration (a[0] != 0)."""
    inv = [1 / a[0]]
    k = 1
    while k < n:
        k = min(2 * k, n)
        e = series_mul(a[:k], inv, k)
        e = [-v for v in e]
        e[0] += 2
        inv = series_mul(inv, e, k)
    return inv[:n]
