"""Real and rational roots of univariate polynomials over Q.

Isolation is the Descartes bisection method on the integer primitive part,
so intervals have dyadic endpoints and everything is exact.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import NamedTuple

from ..errors import ZeroPolynomial
from . import modp
from .poly import Poly, as_rat, int_eval_sign, int_poly_gcd, int_primitive, int_taylor_shift1, _trim


class RootInterval(NamedTuple):
    lo: Fraction
    hi: Fraction
    mid: Fraction

    @property
    def exact(self) -> bool:
        return self.lo == self.hi

    def __float__(self):
        return float(self.mid)

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi


def _int_deriv(c):
    return [i * c[i] for i in range(1, len(c))]


def _int_exact_div(a, b):
    """Exact division of integer polynomials (b divides a over Z up to content)."""
    a = list(a)
    db = len(b) - 1
    q = [Fraction(0)] * (len(a) - db)
    r = [Fraction(v) for v in a]
    for k in range(len(a) - 1 - db, -1, -1):
        c = r[k + db] / b[-1]
        q[k] = c
        if c:
            for i in range(db + 1):
                r[k + i] -= c * b[i]
    den = 1
    for v in q:
        den = den * v.denominator // math.gcd(den, v.denominator)
    return int_primitive([int(v * den) for v in q])


def squarefree_ints(c: list) -> list:
    """Primitive squarefree part of an integer polynomial."""
    c = int_primitive(_trim(list(c)))
    if len(c) <= 2:
        return c
    # a unit gcd(f, f') modulo a prime not dividing lc(f) certifies f squarefree
    for p in modp.PRIMES[:1]:
        if c[-1] % p:
            f = modp.reduce(c, p)
            if len(modp.gcd(f, modp.deriv(f, p), p)) == 1:
                return c
    g = int_poly_gcd(c, _int_deriv(c))
    if len(g) == 1:
        return c
    return _int_exact_div(c, g)


def _variations(c) -> int:
    v, prev = 0, 0
    for x in c:
        if x:
            s = 1 if x > 0 else -1
            if prev and s != prev:
                v += 1
            prev = s
    return v


def _positive_roots_unit(c: list):
    """Isolate roots of c in (0, 1) (c squarefree, c(0) != 0, c(1) != 0 not assumed).

    Yields (a, k, exact) meaning the interval (a/2^k, (a+1)/2^k), or the exact
    root a/2^k when exact is True.
    """
    out = []
    stack = [(c, 0, 0)]
    while stack:
        h, a, k = stack.pop()
        n = len(h) - 1
        if n <= 0:
            continue
        # root at x = 0 for sub-intervals is a shared endpoint; handled by the parent
        t = int_taylor_shift1(list(reversed(h)))
        var = _variations(t)
        if var == 0:
            continue
        if var == 1:
            out.append((a, k, False))
            continue
        # bisect: left(x) = 2^n h(x/2), right(x) = left(x+1)
        left = [h[i] << (n - i) for i in range(n + 1)]
        right = int_taylor_shift1(left)
        if right[0] == 0:
            # exact root at the midpoint
            out.append((2 * a + 1, k + 1, True))
            right = right[1:]
            # divide left by (x - 1)
            q = [0] * n
            acc = 0
            for i in range(n, 0, -1):
                acc = acc + left[i]
                q[i - 1] = acc
            left = q
        stack.append((right, 2 * a + 1, k + 1))
        stack.append((left, 2 * a, k + 1))
    return out


def _root_bound_bits(c: list) -> int:
    """k with every root of c bounded by 2^k in absolute value."""
    lc = abs(c[-1])
    m = max(abs(v) for v in c[:-1]) if len(c) > 1 else 0
    if m == 0:
        return 1
    # Cauchy: every root is below 1 + m/|lc| in absolute value
    return max(1, m.bit_length() - lc.bit_length() + 2)


def _isolate_int(c: list):
    """Isolating intervals of a squarefree integer polynomial, sorted ascending."""
    out = []
    if not c or len(c) == 1:
        return out
    if c[0] == 0:
        out.append((Fraction(0), Fraction(0)))
        c = _trim(c[1:])
        while c and c[0] == 0:
            c = c[1:]
    if len(c) <= 1:
        return out
    k = _root_bound_bits(c)
    B = 1 << k
    n = len(c) - 1
    for sign in (1, -1):
        # g(x) = f(sign * B * x), x in (0, 1)
        g = [c[i] * (sign ** i) << (k * i) for i in range(n + 1)]
        # x = 1 maps to +-B which exceeds every root, so g(1) != 0
        for a, kk, exact in _positive_roots_unit(g):
            lo = Fraction(a * B, 1 << kk)
            if exact:
                hi = lo
            else:
                hi = Fraction((a + 1) * B, 1 << kk)
            if sign < 0:
                lo, hi = -hi, -lo
            out.append((lo, hi))
    out.sort()
    return out


def _sign_lo(c, lo, hi):
    # an isolating interval may start at an exact root found earlier
    s = int_eval_sign(c, lo.numerator, lo.denominator)
    if s == 0:
        # simple root at lo: the sign just to its right is that of c'(lo)
        s = int_eval_sign(_int_deriv(c), lo.numerator, lo.denominator)
    return s


def _refine(c: list, lo: Fraction, hi: Fraction, width: Fraction):
    if lo == hi:
        return lo, hi
    slo = _sign_lo(c, lo, hi)
    while hi - lo > width:
        m = (lo + hi) / 2
        sm = int_eval_sign(c, m.numerator, m.denominator)
        if sm == 0:
            return m, m
        if sm == slo:
            lo = m
        else:
            hi = m
    return lo, hi


def isolate_real_roots(f: Poly, precision=Fraction(1, 10 ** 12)) -> list[RootInterval]:
    """Disjoint isolating intervals of width <= precision, sorted ascending."""
    if f.is_zero():
        raise ZeroPolynomial("root isolation of the zero polynomial")
    precision = as_rat(precision)
    if precision <= 0:
        raise ValueError("precision must be positive")
    c = squarefree_ints(f.primitive_ints())
    out = []
    for lo, hi in _isolate_int(c):
        lo, hi = _refine(c, lo, hi, precision)
        out.append(RootInterval(lo, hi, (lo + hi) / 2))
    return out


def count_real_roots(f: Poly) -> int:
    if f.is_zero():
        raise ZeroPolynomial("root count of the zero polynomial")
    return len(_isolate_int(squarefree_ints(f.primitive_ints())))


def has_root_in(f: Poly, a, b) -> bool:
    """True when f has a real root in the closed interval [a, b]."""
    a, b = as_rat(a), as_rat(b)
    c = squarefree_ints(f.primitive_ints())
    if len(c) <= 1:
        return False
    if int_eval_sign(c, a.numerator, a.denominator) == 0 or int_eval_sign(c, b.numerator, b.denominator) == 0:
        return True
    for lo, hi in _isolate_int(c):
        if hi < a or lo > b:
            continue
        if a <= lo and hi <= b:
            return True
        # straddles an endpoint: refine until decided
        while True:
            if lo == hi:
                if a <= lo <= b:
                    return True
                break
            if hi < a or lo > b:
                break
            if a <= lo and hi <= b:
                return True
            lo, hi = _refine(c, lo, hi, (hi - lo) / 2)
    return False


def simplest_between(lo: Fraction, hi: Fraction) -> Fraction:
    """Fraction of least denominator in the closed interval [lo, hi]."""
    if lo > hi:
        lo, hi = hi, lo
    if lo <= 0 <= hi:
        return Fraction(0)
    if hi < 0:
        return -simplest_between(-hi, -lo)
    p0, q0, p1, q1 = 0, 1, 1, 0
    x, y = lo, hi
    while True:
        a = math.floor(x)
        b = a if a == x else a + 1
        if b <= y:
            return Fraction(b * p1 + p0, b * q1 + q0)
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        x, y = 1 / (y - a), 1 / (x - a)


def rational_roots(f: Poly) -> list[Fraction]:
    """All rational roots of f, ascending, each once.

    A rational root a/b of the primitive integer form satisfies b | lc and
    a | tc.  Each real root is isolated and the interval is shrunk until its
    simplest fraction either is a root or has a denominator above |lc|.
    """
    if f.is_zero():
        raise ZeroPolynomial("rational roots of the zero polynomial")
    c = squarefree_ints(f.primitive_ints())
    roots = []
    if len(c) <= 1:
        return roots
    if c[0] == 0:
        roots.append(Fraction(0))
        c = c[1:]
        if len(c) <= 1:
            return roots
    L = abs(c[-1])
    T = abs(c[0])
    stop_width = Fraction(1, 2 * L * L)
    for lo, hi in _isolate_int(c):
        if lo == hi:
            roots.append(lo)
            continue
        slo = _sign_lo(c, lo, hi)
        while True:
            cand = simplest_between(lo, hi)
            if cand.denominator > L:
                break
            inside = lo < cand < hi
            if inside and L % cand.denominator == 0 and (cand.numerator == 0 or T % cand.numerator == 0):
                if int_eval_sign(c, cand.numerator, cand.denominator) == 0:
                    roots.append(cand)
                    break
            if hi - lo < stop_width:
                break
            m = (lo + hi) / 2
            sm = int_eval_sign(c, m.numerator, m.denominator)
            if sm == 0:
                roots.append(m)
                break
            if sm == slo:
                lo = m
            else:
                hi = m
    roots.sort()
    return roots


def real_roots_float(f: Poly, precision=Fraction(1, 10 ** 12)) -> list[float]:
    return [float(r.mid) for r in isolate_real_roots(f, precision)]
