"""Dense univariate polynomials and reduced rational functions over Q.

Coefficients are stored ascending (``coeffs[i]`` multiplies ``x**i``) as
``Fraction``.  Heavy operations (gcd, exact evaluation) drop to integer
arithmetic on the primitive part, which is much faster than Fraction loops.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce
from numbers import Rational

from ..errors import ZeroPolynomial
from . import modp

Rat = Fraction


def as_rat(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, float):
        # exact binary value of the float
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to a rational")


# ---------------------------------------------------------------------------
# integer coefficient lists (ascending, no trailing zeros)


def _trim(c: list) -> list:
    while c and not c[-1]:
        c.pop()
    return c


def int_content(c) -> int:
    g = 0
    for v in c:
        g = math.gcd(g, v)
        if g == 1:
            break
    return g


def int_primitive(c: list) -> list:
    """Primitive part with positive leading coefficient."""
    if not c:
        return []
    g = int_content(c)
    if c[-1] < 0:
        g = -g
    if g == 1:
        return list(c)
    return [v // g for v in c]


def int_prem(a: list, b: list) -> list:
    """Pseudo-remainder of a by b (lc(b)^k * a mod b)."""
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    while len(r) - 1 >= db and r:
        shift = len(r) - 1 - db
        lr = r[-1]
        r = [v * lb for v in r]
        for i, bv in enumerate(b):
            r[i + shift] -= lr * bv
        r.pop()
        _trim(r)
    return r


def _int_divides(g: list, a: list) -> bool:
    """Whether the integer polynomial g divides a over Q (g primitive)."""
    r = list(a)
    dg = len(g) - 1
    lg = g[-1]
    while len(r) - 1 >= dg and r:
        q, m = divmod(r[-1], lg)
        if m:
            # a primitive divisor of an integer polynomial divides it over Z
            return False
        shift = len(r) - 1 - dg
        for i, gv in enumerate(g):
            r[i + shift] -= q * gv
        r.pop()
        _trim(r)
    return not r


def _modular_gcd(a: list, b: list, max_primes: int = 4000):
    """gcd by CRT over word-size primes, verified by exact division; None if undecided."""
    lc = math.gcd(a[-1], b[-1])
    acc, mod = None, 1
    deg = None
    prev = None
    used = 0
    for p in modp.primes_below():
        if used >= max_primes:
            return None
        if a[-1] % p == 0 or b[-1] % p == 0:
            continue
        used += 1
        g = modp.gcd(modp.reduce(a, p), modp.reduce(b, p), p)
        d = len(g) - 1
        if d == 0:
            return [1]
        if deg is None or d < deg:
            # smaller degree: every earlier prime was unlucky
            deg, acc, mod, prev = d, None, 1, None
        elif d > deg:
            continue
        g = [(v * lc) % p for v in g]
        if acc is None:
            acc, mod = g, p
        else:
            inv = pow(mod, -1, p)
            acc = [x + mod * (((y - x) * inv) % p) for x, y in zip(acc, g)]
            mod *= p
        half = mod // 2
        cand = _trim([v - mod if v > half else v for v in acc])
        if cand == prev:
            cand = int_primitive(cand)
            if _int_divides(cand, a) and _int_divides(cand, b):
                return cand
        prev = cand
    return None


def int_poly_gcd(a: list, b: list) -> list:
    """gcd of two integer polynomials.

    A modular algorithm handles the usual case; the primitive remainder
    sequence is the fallback.
    """
    a = int_primitive(_trim(list(a)))
    b = int_primitive(_trim(list(b)))
    if not a:
        return b
    if not b:
        return a
    if len(a) < len(b):
        a, b = b, a
    if len(b) > 1:
        g = _modular_gcd(a, b)
        if g is not None:
            return g
    while b:
        if len(b) == 1:
            return [1]
        r = int_prem(a, b)
        a, b = b, int_primitive(r)
    return a


def int_eval_sign(c: list, num: int, den: int) -> int:
    """Sign of the polynomial at num/den (den > 0) using only integers."""
    if not c:
        return 0
    n = len(c) - 1
    h = c[n]
    bp = 1
    for i in range(n - 1, -1, -1):
        bp *= den
        h = h * num + c[i] * bp
    return (h > 0) - (h < 0)


def int_eval_hom(c: list, num: int, den: int) -> int:
    """den**deg * f(num/den) as an integer."""
    if not c:
        return 0
    n = len(c) - 1
    h = c[n]
    bp = 1
    for i in range(n - 1, -1, -1):
        bp *= den
        h = h * num + c[i] * bp
    return h


def int_taylor_shift1(c: list) -> list:
    """Coefficients of f(x + 1)."""
    a = list(c)
    n = len(a)
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            a[j] += a[j + 1]
    return a


def int_taylor_shift(c: list, k: int) -> list:
    """Coefficients of f(x + k) for integer k."""
    if k == 0:
        return list(c)
    a = list(c)
    n = len(a)
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            a[j] += k * a[j + 1]
    return a


# ---------------------------------------------------------------------------


class Poly:
    """Immutable dense polynomial with rational coefficients."""

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs=()):
        c = [as_rat(v) for v in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)
        self._hash = None

    @classmethod
    def _raw(cls, coeffs):
        # trusted constructor: coeffs already Fractions without trailing zero
        p = object.__new__(cls)
        p.coeffs = tuple(coeffs)
        p._hash = None
        return p

    @classmethod
    def const(cls, c) -> "Poly":
        return cls([c])

    @classmethod
    def x(cls) -> "Poly":
        return cls._raw((Fraction(0), Fraction(1)))

    @classmethod
    def from_roots(cls, roots) -> "Poly":
        p = cls.const(1)
        for r in roots:
            p = p * cls([-as_rat(r), 1])
        return p

    @classmethod
    def from_ints(cls, ints) -> "Poly":
        return cls._raw(Fraction(v) for v in _trim(list(ints)))

    # -- basic properties
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def coeff(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def __len__(self):
        return len(self.coeffs)

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == Poly([other]).coeffs
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("Poly", self.coeffs))
        return self._hash

    def __repr__(self):
        return f"Poly({self.pretty('x')})"

    # -- arithmetic
    def __neg__(self):
        return Poly._raw(-v for v in self.coeffs)

    def __add__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        c = list(a)
        for i, v in enumerate(b):
            c[i] += v
        return Poly(c)

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
            if other == 0:
                return Poly()
            return Poly._raw(v * other for v in self.coeffs)
        other = _coerce(other)
        if other is None:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly()
        if len(a) == 1:
            return other * a[0]
        if len(b) == 1:
            return self * b[0]
        return Poly._raw(_mul_fracs(a, b))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative exponent")
        result = Poly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __divmod__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        db = other.degree
        if len(r) - 1 < db:
            return Poly(), self
        inv = 1 / other.lc
        q = [Fraction(0)] * (len(r) - db)
        b = other.coeffs
        for k in range(len(r) - 1 - db, -1, -1):
            c = r[k + db] * inv
            q[k] = c
            if c:
                for i in range(db + 1):
                    r[k + i] -= c * b[i]
        return Poly(q), Poly(r[:db])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other) -> "Poly":
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ValueError("division is not exact")
        return q

    def divides(self, other) -> bool:
        """True when self divides other."""
        if self.is_zero():
            return other.is_zero()
        return (other % self).is_zero()

    # -- evaluation
    def __call__(self, x):
        if isinstance(x, Poly):
            return self.compose(x)
        if isinstance(x, RatFun):
            return RatFun.from_poly(self).compose(x)
        if isinstance(x, float) or isinstance(x, complex):
            acc = 0.0
            for v in reversed(self.coeffs):
                acc = acc * x + float(v)
            return acc
        if isinstance(x, int) and all(v.denominator == 1 for v in self.coeffs):
            acc = 0
            for v in reversed(self.coeffs):
                acc = acc * x + v.numerator
            return Fraction(acc)
        x = as_rat(x)
        if not self.coeffs:
            return Fraction(0)
        den, ints = self.int_form()
        return Fraction(int_eval_hom(ints, x.numerator, x.denominator),
                        x.denominator ** self.degree) / den

    def eval_float(self, x):
        """Evaluate at floats or numpy arrays by Horner."""
        acc = 0.0 * x
        for v in reversed(self.coeffs):
            acc = acc * x + float(v)
        return acc

    def compose(self, g: "Poly") -> "Poly":
        acc = Poly()
        for v in reversed(self.coeffs):
            acc = acc * g + Poly._raw([v])
        return acc

    def deriv(self) -> "Poly":
        return Poly._raw(self.coeffs[i] * i for i in range(1, len(self.coeffs)))

    def shift(self, a) -> "Poly":
        """f(x + a)."""
        a = as_rat(a)
        if a == 0 or self.degree < 1:
            return self
        c = list(self.coeffs)
        n = len(c)
        for i in range(n - 1):
            for j in range(n - 2, i - 1, -1):
                c[j] += a * c[j + 1]
        return Poly._raw(c)

    def scale_var(self, a) -> "Poly":
        """f(a*x)."""
        a = as_rat(a)
        out, p = [], Fraction(1)
        for v in self.coeffs:
            out.append(v * p)
            p *= a
        return Poly(out)

    def reverse(self, n: int | None = None) -> "Poly":
        """x**n * f(1/x); n defaults to the degree."""
        if n is None:
            n = self.degree
        c = list(self.coeffs) + [Fraction(0)] * max(0, n + 1 - len(self.coeffs))
        return Poly(reversed(c[: n + 1]))

    def homogenize(self, q: "Poly", p: "Poly", n: int) -> "Poly":
        """Return sum c_k p^k q^(n-k), i.e. q^n * f(p/q) for n >= deg f."""
        if self.degree > n:
            raise ValueError("homogenizing degree too small")
        ppow = [Poly.const(1)]
        for _ in range(n):
            ppow.append(ppow[-1] * p)
        qpow = [Poly.const(1)]
        for _ in range(n):
            qpow.append(qpow[-1] * q)
        acc = Poly()
        for k, v in enumerate(self.coeffs):
            if v:
                acc = acc + ppow[k] * qpow[n - k] * v
        return acc

    # -- normal forms
    def monic(self) -> "Poly":
        if not self.coeffs:
            return self
        lc = self.coeffs[-1]
        if lc == 1:
            return self
        inv = 1 / lc
        return Poly._raw(v * inv for v in self.coeffs)

    def int_form(self):
        """(d, ints) with self == ints / d and d a positive integer."""
        d = 1
        for v in self.coeffs:
            d = d * v.denominator // math.gcd(d, v.denominator)
        return d, [v.numerator * (d // v.denominator) for v in self.coeffs]

    def primitive_ints(self) -> list:
        """Integer primitive part with positive leading coefficient."""
        return int_primitive(self.int_form()[1])

    def primitive(self) -> "Poly":
        return Poly.from_ints(self.primitive_ints())

    def content(self) -> Fraction:
        """Rational c with self == c * primitive()."""
        if not self.coeffs:
            return Fraction(0)
        return self.lc / self.primitive().lc

    def is_integral(self) -> bool:
        return all(v.denominator == 1 for v in self.coeffs)

    # -- display
    def pretty(self, var: str = "t") -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            a = -c if c < 0 else c
            if i == 0:
                body = _fmt_rat(a)
            else:
                mono = var if i == 1 else f"{var}^{i}"
                body = mono if a == 1 else f"{_fmt_rat(a)}*{mono}"
            parts.append((sign, body))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            out += sign + body
        return out

    def to_float_coeffs(self):
        return [float(v) for v in self.coeffs]


def _fmt_rat(a: Fraction) -> str:
    if a.denominator == 1:
        return str(a.numerator)
    return f"{a.numerator}/{a.denominator}"


def _coerce(v):
    if isinstance(v, Poly):
        return v
    if isinstance(v, (int, Fraction)):
        return Poly._raw([Fraction(v)]) if v else Poly()
    return None


def _mul_fracs(a, b):
    # multiply via a common integer scaling; Fraction convolution is slow
    da = 1
    for v in a:
        da = da * v.denominator // math.gcd(da, v.denominator)
    db = 1
    for v in b:
        db = db * v.denominator // math.gcd(db, v.denominator)
    ia = [v.numerator * (da // v.denominator) for v in a]
    ib = [v.numerator * (db // v.denominator) for v in b]
    c = int_mul(ia, ib)
    d = da * db
    if d == 1:
        return [Fraction(v) for v in c]
    return [Fraction(v, d) for v in c]


def int_mul(a: list, b: list) -> list:
    if not a or not b:
        return []
    c = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                c[i + j] += x * y
    return c


# ---------------------------------------------------------------------------


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd; gcd(a, 0) = monic(a) and gcd(0, 0) = 0."""
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    if a.is_constant() or b.is_constant():
        return Poly.const(1)
    g = int_poly_gcd(a.primitive_ints(), b.primitive_ints())
    return Poly.from_ints(g).monic()


def poly_gcd_many(polys) -> Poly:
    g = Poly()
    for p in sorted(polys, key=lambda p: (p.is_zero(), p.degree)):
        g = poly_gcd(g, p)
        if g.degree == 0:
            break
    return g


def poly_lcm(a: Poly, b: Poly) -> Poly:
    if a.is_zero() or b.is_zero():
        return Poly()
    return (a * b.exact_div(poly_gcd(a, b))).monic()


def squarefree_poly(f: Poly) -> Poly:
    """Monic squarefree part of a univariate polynomial."""
    if f.is_zero():
        raise ZeroPolynomial("squarefree part of the zero polynomial")
    if f.degree < 1:
        return Poly.const(1)
    g = poly_gcd(f, f.deriv())
    return f.exact_div(g).monic()


def is_squarefree_poly(f: Poly) -> bool:
    if f.degree < 1:
        return True
    return poly_gcd(f, f.deriv()).degree == 0


def resultant(a: Poly, b: Poly) -> Fraction:
    """Resultant by the Euclidean recurrence over Q."""
    if a.is_zero() or b.is_zero():
        return Fraction(0)
    res = Fraction(1)
    while True:
        da, db = a.degree, b.degree
        if db == 0:
            return res * b.lc ** da
        r = a % b
        if r.is_zero():
            return Fraction(0)
        if da % 2 == 1 and db % 2 == 1:
            res = -res
        res *= b.lc ** (da - r.degree)
        a, b = b, r


def discriminant(f: Poly) -> Fraction:
    n = f.degree
    if n < 1:
        raise ValueError("discriminant of a constant")
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * resultant(f, f.deriv()) / f.lc


# ---------------------------------------------------------------------------


class RatFun:
    """Reduced rational function num/den with monic denominator."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den=None, _reduced=False):
        num = _coerce(num) if not isinstance(num, Poly) else num
        if num is None:
            raise TypeError("numerator must be a Poly or rational")
        if den is None:
            den = Poly.const(1)
        else:
            den = _coerce(den) if not isinstance(den, Poly) else den
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if not _reduced:
            if num.is_zero():
                den = Poly.const(1)
            else:
                g = poly_gcd(num, den)
                if g.degree > 0:
                    num = num.exact_div(g)
                    den = den.exact_div(g)
            lc = den.lc
            if lc != 1:
                num = num * (1 / lc)
                den = den.monic()
        self.num = num
        self.den = den
        self._hash = None

    @classmethod
    def from_poly(cls, p: Poly) -> "RatFun":
        return cls(p, Poly.const(1), _reduced=True)

    @classmethod
    def const(cls, c) -> "RatFun":
        return cls.from_poly(Poly.const(c))

    @classmethod
    def x(cls) -> "RatFun":
        return cls.from_poly(Poly.x())

    @property
    def degree(self) -> int:
        return max(self.num.degree, self.den.degree, 0)

    def is_zero(self):
        return self.num.is_zero()

    def is_constant(self):
        return self.num.is_constant() and self.den.is_constant()

    def is_poly(self):
        return self.den.degree == 0

    def __eq__(self, other):
        if isinstance(other, RatFun):
            return self.num == other.num and self.den == other.den
        if isinstance(other, Poly):
            return self.is_poly() and self.num == other
        if isinstance(other, (int, Fraction)):
            return self.is_poly() and self.num == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("RatFun", self.num.coeffs, self.den.coeffs))
        return self._hash

    def __repr__(self):
        return f"RatFun({self.pretty('x')})"

    def __neg__(self):
        return RatFun(-self.num, self.den, _reduced=True)

    def __add__(self, other):
        other = _coerce_rf(other)
        if other is None:
            return NotImplemented
        if self.den == other.den:
            return RatFun(self.num + other.num, self.den)
        return RatFun(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce_rf(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce_rf(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _coerce_rf(other)
        if other is None:
            return NotImplemented
        return RatFun(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce_rf(other)
        if other is None:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RatFun(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = _coerce_rf(other)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, n: int):
        if n < 0:
            return RatFun.const(1) / (self ** (-n))
        return RatFun(self.num ** n, self.den ** n, _reduced=True)

    def __call__(self, x):
        if isinstance(x, (RatFun, Poly)):
            return self.compose(x)
        if isinstance(x, float) or isinstance(x, complex):
            return self.num(x) / self.den(x)
        d = self.den(x)
        if d == 0:
            raise ZeroDivisionError("evaluation at a pole")
        return self.num(x) / d

    def eval_float(self, x):
        return self.num.eval_float(x) / self.den.eval_float(x)

    def compose(self, g) -> "RatFun":
        """self(g) for a Poly or RatFun g."""
        if isinstance(g, Poly):
            g = RatFun.from_poly(g)
        n = max(self.num.degree, self.den.degree, 0)
        a = self.num.homogenize(g.den, g.num, n)
        b = self.den.homogenize(g.den, g.num, n)
        return RatFun(a, b)

    def deriv(self) -> "RatFun":
        return RatFun(self.num.deriv() * self.den - self.num * self.den.deriv(), self.den * self.den)

    def mobius_inverse(self) -> "RatFun":
        """Inverse of a degree-one function (a t + b)/(c t + d)."""
        if self.degree != 1:
            raise ValueError("only degree-one rational functions are invertible")
        a, b = self.num.coeff(1), self.num.coeff(0)
        c, d = self.den.coeff(1), self.den.coeff(0)
        if a * d - b * c == 0:
            raise ValueError("singular Mobius transformation")
        return RatFun(Poly([-b, d]), Poly([a, -c]))

    def pretty(self, var: str = "t") -> str:
        if self.den.degree == 0:
            return self.num.pretty(var)
        return f"({self.num.pretty(var)})/({self.den.pretty(var)})"


def _coerce_rf(v):
    if isinstance(v, RatFun):
        return v
    if isinstance(v, Poly):
        return RatFun.from_poly(v)
    if isinstance(v, (int, Fraction)):
        return RatFun.const(v)
    return None


def lcm_many(polys) -> Poly:
    return reduce(poly_lcm, polys, Poly.const(1))
