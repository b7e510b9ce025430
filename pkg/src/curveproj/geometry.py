"""Projective 3-space: points, planes, lines and projection matrices.

Exact objects hold Fractions.  The numeric variants (``NumLine`` and float
ProjPoints) are used by the approximate pipeline.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import BadRank, CollapsesToPoint, DegenerateCurve, EyeOnPlane, IdenticalPoints, NearParallel
from .ratfun import Poly, as_rat, poly_gcd_many


def _is_exact(v) -> bool:
    return isinstance(v, (int, Fraction))


class ProjPoint:
    """Point [x:y:z:w] of projective 3-space, stored in canonical form.

    Exact points are divided by their last nonzero coordinate; float points
    are scaled to unit length with the last nonzero coordinate positive.
    """

    __slots__ = ("coords", "exact")

    def __init__(self, coords):
        coords = tuple(coords)
        if len(coords) != 4:
            raise ValueError("projective points have four coordinates")
        exact = all(_is_exact(c) for c in coords)
        if exact:
            coords = tuple(as_rat(c) for c in coords)
            if not any(coords):
                raise ValueError("the zero vector is not a projective point")
            last = next(c for c in reversed(coords) if c != 0)
            coords = tuple(c / last for c in coords)
        else:
            v = np.asarray([float(c) for c in coords])
            norm = float(np.linalg.norm(v))
            if norm == 0.0:
                raise ValueError("the zero vector is not a projective point")
            v = v / norm
            nz = np.nonzero(np.abs(v) > 1e-300)[0]
            if v[nz[-1]] < 0:
                v = -v
            coords = tuple(float(c) for c in v)
        self.coords = coords
        self.exact = exact

    @classmethod
    def affine(cls, x, y, z) -> "ProjPoint":
        if all(_is_exact(c) for c in (x, y, z)):
            return cls((x, y, z, 1))
        return cls((float(x), float(y), float(z), 1.0))

    @property
    def at_infinity(self) -> bool:
        w = self.coords[3]
        return w == 0 if self.exact else abs(w) < 1e-12

    def to_affine(self):
        if self.at_infinity:
            raise ValueError("point at infinity has no affine coordinates")
        w = self.coords[3]
        return tuple(c / w for c in self.coords[:3])

    def direction(self):
        return tuple(self.coords[:3])

    def __eq__(self, other):
        if not isinstance(other, ProjPoint):
            return NotImplemented
        if self.exact and other.exact:
            return self.coords == other.coords
        a = np.asarray([float(c) for c in self.coords])
        b = np.asarray([float(c) for c in other.coords])
        a /= np.linalg.norm(a)
        b /= np.linalg.norm(b)
        return bool(min(np.linalg.norm(a - b), np.linalg.norm(a + b)) < 1e-9)

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        if self.exact:
            body = ":".join(str(c) for c in self.coords)
        else:
            body = ":".join(f"{c:.10g}" for c in self.coords)
        return f"ProjPoint[{body}]"


@dataclass(frozen=True)
class Plane:
    """Plane Ax + By + Cz + D = 0 with first nonzero coefficient equal to 1."""

    A: Fraction
    B: Fraction
    C: Fraction
    D: Fraction

    def __post_init__(self):
        vals = [as_rat(v) for v in (self.A, self.B, self.C, self.D)]
        if not any(vals[:3]):
            raise ValueError("plane normal must be nonzero")
        lead = next(v for v in vals if v != 0)
        vals = [v / lead for v in vals]
        for name, v in zip("ABCD", vals):
            object.__setattr__(self, name, v)

    @property
    def vector(self):
        return (self.A, self.B, self.C, self.D)

    @property
    def normal(self):
        return (self.A, self.B, self.C)

    def evaluate(self, p: ProjPoint):
        return sum(a * b for a, b in zip(self.vector, p.coords))

    def contains(self, p: ProjPoint) -> bool:
        v = self.evaluate(p)
        return v == 0 if p.exact else abs(v) < 1e-9

    def __str__(self):
        parts = []
        for coef, name in zip(self.vector, ("x", "y", "z", "")):
            if coef == 0:
                continue
            parts.append((coef, name))
        out = ""
        for k, (coef, name) in enumerate(parts):
            sign = "-" if coef < 0 else "+"
            a = -coef if coef < 0 else coef
            body = (str(a) if a != 1 or not name else "") + name
            if k == 0:
                out = ("-" if sign == "-" else "") + body
            else:
                out += sign + body
        return out + "=0"


@dataclass(frozen=True)
class Line3:
    """Exact line: base point (affine) plus a nonzero direction."""

    base: tuple
    direction: tuple

    def __post_init__(self):
        if not any(self.direction):
            raise ValueError("line direction must be nonzero")

    @property
    def base_point(self) -> ProjPoint:
        return ProjPoint.affine(*self.base)

    def point_at(self, mu):
        return tuple(b + mu * d for b, d in zip(self.base, self.direction))

    def contains(self, p) -> bool:
        w = tuple(a - b for a, b in zip(p, self.base))
        return not any(_cross(w, self.direction))

    def to_numeric(self) -> "NumLine":
        return NumLine(np.array([float(v) for v in self.base]), np.array([float(v) for v in self.direction]))


@dataclass(frozen=True)
class NumLine:
    base: np.ndarray
    direction: np.ndarray


class ProjMatrix:
    """4x4 projection matrix; entries are Fractions (or floats when numeric)."""

    __slots__ = ("entries",)

    def __init__(self, entries):
        rows = tuple(tuple(r) for r in entries)
        if len(rows) != 4 or any(len(r) != 4 for r in rows):
            raise ValueError("projection matrices are 4x4")
        self.entries = rows

    @property
    def exact(self):
        return all(_is_exact(v) for r in self.entries for v in r)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other):
        if not isinstance(other, ProjMatrix):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return f"ProjMatrix({[[str(v) for v in r] for r in self.entries]})"

    def rows(self):
        return [list(r) for r in self.entries]

    def apply(self, v):
        return tuple(sum(a * b for a, b in zip(row, v)) for row in self.entries)

    def apply_point(self, p: ProjPoint) -> ProjPoint:
        return ProjPoint(self.apply(p.coords))

    def rank(self) -> int:
        return rank_exact(self.rows())

    def m_rank(self) -> int:
        return rank_exact([list(r[:3]) for r in self.entries])

    @property
    def kind(self) -> str:
        return "perspective" if self.m_rank() == 3 else "parallel"

    def canonical(self) -> "ProjMatrix":
        """Scale so that the first nonzero entry (row-major) is 1."""
        first = next(v for r in self.entries for v in r if v != 0)
        return ProjMatrix([[v / first for v in r] for r in self.entries])

    def same_projectively(self, other: "ProjMatrix") -> bool:
        return self.canonical() == other.canonical()

    def to_numpy(self):
        return np.array([[float(v) for v in r] for r in self.entries])


# ---------------------------------------------------------------------------
# exact linear algebra


def rref(rows):
    """Reduced row echelon form over Q; returns (matrix, pivot columns)."""
    m = [[as_rat(v) for v in r] for r in rows]
    if not m:
        return m, []
    nr, nc = len(m), len(m[0])
    pivots = []
    r = 0
    for c in range(nc):
        piv = next((i for i in range(r, nr) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(nr):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nr:
            break
    return m, pivots


def rank_exact(rows) -> int:
    return len(rref(rows)[1])


def nullspace(rows, ncols=None):
    """Basis of the right nullspace over Q (list of vectors)."""
    if not rows:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    m, pivots = rref(rows)
    nc = len(m[0])
    free = [c for c in range(nc) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * nc
        v[f] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -m[r][f]
        basis.append(v)
    return basis


def _cross(a, b):
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


# ---------------------------------------------------------------------------


def build_projection_matrix(eye: ProjPoint, plane: Plane) -> ProjMatrix:
    """Projection from ``eye`` onto ``plane``: P = a pi^T - (pi . a) I."""
    a = eye.coords
    pi = plane.vector
    pa = sum(x * y for x, y in zip(pi, a))
    if (eye.exact and pa == 0) or (not eye.exact and abs(pa) < 1e-14):
        raise EyeOnPlane("the eye point lies on the projection plane")
    rows = []
    for i in range(4):
        rows.append([a[i] * pi[j] - (pa if i == j else 0) for j in range(4)])
    return ProjMatrix(rows)


def eye_from_matrix(P: ProjMatrix) -> ProjPoint:
    if P.exact:
        rows = P.rows()
        if rank_exact(rows) != 3:
            raise BadRank(f"projection matrix has rank {rank_exact(rows)}, expected 3")
        return ProjPoint(nullspace(rows)[0])
    A = P.to_numpy()
    u, sv, vt = np.linalg.svd(A)
    if sv[2] < 1e-12 * sv[0] or sv[3] > 1e-9 * sv[0]:
        raise BadRank("numeric projection matrix does not have rank 3")
    return ProjPoint(vt[-1])


def projection_plane_of(P: ProjMatrix) -> Plane:
    """Plane spanned by the image of P (left kernel)."""
    rows = [list(col) for col in zip(*P.entries)]
    ker = nullspace(rows)
    if len(ker) != 1:
        raise BadRank("projection matrix does not have rank 3")
    return Plane(*ker[0])


def apply_projection(P: ProjMatrix, c):
    """Image of a curve: P . x~(t), dehomogenized."""
    from .curves import CurveParam

    X = c.projective()
    img = [Poly() for _ in range(4)]
    for i in range(4):
        acc = Poly()
        for j in range(4):
            e = P.entries[i][j]
            if e:
                acc = acc + X[j] * as_rat(e)
        img[i] = acc
    nonzero = [p for p in img if not p.is_zero()]
    if not nonzero:
        raise CollapsesToPoint("the curve is mapped to nothing (lies through the eye)")
    g = poly_gcd_many(nonzero)
    red = [p.exact_div(g) if not p.is_zero() else p for p in img]
    if all(p.degree <= 0 for p in red):
        raise CollapsesToPoint("the curve is a line through the eye")
    if red[3].is_zero():
        raise DegenerateCurve("the image lies at infinity")
    from .ratfun import RatFun

    comps = [RatFun(red[i], red[3]) for i in range(3)]
    return CurveParam(*comps, variable=c.variable, label=(c.label + " projected").strip())


def line_through(p: ProjPoint, q: ProjPoint) -> Line3:
    if p.at_infinity and q.at_infinity:
        raise ValueError("at least one point must be affine")
    if p == q:
        raise IdenticalPoints("the two points coincide")
    if p.at_infinity:
        p, q = q, p
    base = p.to_affine()
    if q.at_infinity:
        d = q.direction()
    else:
        qa = q.to_affine()
        d = tuple(b - a for a, b in zip(base, qa))
    return Line3(tuple(base), tuple(d))


class _Marker:
    def __init__(self, name):
        self.name = name

    def __repr__(self):
        return self.name

    def __bool__(self):
        return False


SKEW = _Marker("Skew")
IDENTICAL = _Marker("Identical")


def intersect_lines_exact(L1: Line3, L2: Line3):
    """Affine meet point, the common point at infinity, SKEW or IDENTICAL."""
    d1, d2 = L1.direction, L2.direction
    w = tuple(b - a for a, b in zip(L1.base, L2.base))
    n = _cross(d1, d2)
    if not any(n):
        # parallel
        if not any(_cross(w, d1)):
            return IDENTICAL
        return ProjPoint((d1[0], d1[1], d1[2], 0))
    if _dot(w, n) != 0:
        return SKEW
    nn = _dot(n, n)
    alpha = _dot(_cross(w, d2), n) / nn
    pt = L1.point_at(alpha)
    return ProjPoint.affine(*pt)


def pseudo_intersect_least_squares(L1, L2, tol: float = 1e-12, anchor: str = "first"):
    """Least-squares meet of two nearly intersecting lines, and their gap.

    Solves base1 + mu d1 = base2 + nu d2 in the least-squares sense.  With
    ``anchor="first"`` the returned point is base1 + mu d1, the point of L1
    closest to L2; ``anchor="midpoint"`` gives the midpoint of the common
    perpendicular instead.  The gap is the length of that perpendicular.
    """
    if isinstance(L1, Line3):
        L1 = L1.to_numeric()
    if isinstance(L2, Line3):
        L2 = L2.to_numeric()
    b1, d1 = np.asarray(L1.base, float), np.asarray(L1.direction, float)
    b2, d2 = np.asarray(L2.base, float), np.asarray(L2.direction, float)
    u1 = d1 / np.linalg.norm(d1)
    u2 = d2 / np.linalg.norm(d2)
    # sin^2 of the angle via the cross product stays accurate for small angles
    if np.cross(u1, u2) @ np.cross(u1, u2) <= tol:
        raise NearParallel("lines are parallel within tolerance")
    # QR on unit directions: the normal equations would square the
    # condition number, which matters for lines meeting at shallow angles
    A = np.column_stack([u1, -u2])
    (sc, tc), *_ = np.linalg.lstsq(A, b2 - b1, rcond=None)
    p1 = b1 + sc * u1
    p2 = b2 + tc * u2
    gap = float(np.linalg.norm(p1 - p2))
    if anchor == "midpoint":
        return (p1 + p2) / 2.0, gap
    if anchor != "first":
        raise ValueError(f"unknown anchor {anchor!r}")
    return p1, gap


def line_distance_parallel(L1: NumLine, L2: NumLine) -> float:
    d = L1.direction / np.linalg.norm(L1.direction)
    w = L2.base - L1.base
    return float(np.linalg.norm(w - (w @ d) * d))
