"""Approximate detection by branch tracing of the constraint surface.

Used for irrational eye points and for inputs whose coefficients carry noise.
The constraint surface itself is still exact (decimal inputs are read as
rationals); only root locations, eye estimates and distances are floats.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .curves import CurveParam, plane_of_curve
from .detect import (
    ConstraintSurface,
    ProjectionFinding,
    certify_exact,
    compute_constraint_surface,
    graph_poly,
)
from .errors import CurveprojError, IncompatibleStrip, NearParallel, PlaneMismatch, Rejected
from .geometry import NumLine, Plane, ProjPoint, build_projection_matrix, pseudo_intersect_least_squares
from .ratfun import BiPoly, Poly, RatFun, as_rat, bipoly_gcd_many, count_real_roots, has_root_in, isolate_real_roots, resultant_in_s

DEFAULT_EPSILON = 1e-3
DEFAULT_SAMPLES = 2048
DEFAULT_PRECISION = Fraction(1, 10 ** 12)

# strips tried in order: [b, b + w] for these bases, then narrower widths
_STRIP_BASES = (1, 2, 3, 0, -1, 4, -2, 5, -3, 6, -4, 7, -5)
_STRIP_WIDTHS = (Fraction(1, 2), Fraction(1, 8), Fraction(1, 32))
_PROBES = 8
# exact branch-point test only when Res_s(N, N_s) has modest degree
_MAX_DISC_DEGREE = 200
# eye-candidate witness points farther than this are treated as poles
_CLIP = 1e7
# Hausdorff samples beyond this radius are dropped: near a pole the float
# error of a point grows with the square of its norm
_H_RADIUS = 1e4
_LUCKY_TOL = 1e-9


@dataclass
class BranchSample:
    t: float
    roots: list

    @property
    def count(self) -> int:
        return len(self.roots)


@dataclass
class ApproxFinding:
    eye: np.ndarray | None  # affine eye, or None for a parallel projection
    direction: np.ndarray | None  # projection direction when parallel
    gap: float
    hausdorff: float
    accepted: bool
    epsilon: float
    branch: int = 0
    s_pair: tuple = ()
    t_pair: tuple = ()
    promoted: ProjectionFinding | None = None

    @property
    def kind(self) -> str:
        return "parallel" if self.eye is None else "perspective"

    @property
    def certification(self) -> str:
        return "exact" if self.promoted is not None else "numeric"

    def proj_point(self) -> ProjPoint:
        if self.eye is None:
            return ProjPoint((*self.direction, 0.0))
        return ProjPoint((*self.eye, 1.0))


# ---------------------------------------------------------------------------
# numeric curves


class NumCurve:
    """Float homogeneous tuple (X, Y, Z, W); coefficient arrays are ascending."""

    def __init__(self, hom):
        self.hom = [np.asarray(c, dtype=float) for c in hom]
        self._desc = [c[::-1] for c in self.hom]

    @classmethod
    def from_curve(cls, c: CurveParam) -> "NumCurve":
        return cls([p.to_float_coeffs() for p in c.projective()])

    def project(self, P: np.ndarray) -> "NumCurve":
        n = max(len(c) for c in self.hom)
        M = np.zeros((4, n))
        for j, c in enumerate(self.hom):
            M[j, : len(c)] = c
        return NumCurve(P @ M)

    def eval(self, t):
        t = np.asarray(t, dtype=float)
        H = [np.polyval(c, t) for c in self._desc]
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            return np.stack([H[0] / H[3], H[1] / H[3], H[2] / H[3]], axis=-1)

    def limit_point(self):
        """Image of the parameter at infinity, or None when it lies at infinity."""
        n = max(len(c) for c in self.hom) - 1
        lead = np.array([c[n] if len(c) > n else 0.0 for c in self.hom])
        if abs(lead[3]) < 1e-14 * max(1.0, np.abs(lead).max()):
            return None
        return lead[:3] / lead[3]


def param_chart(u):
    """Map (-1, 1) onto the real line."""
    return u / (1.0 - u * u)


# ---------------------------------------------------------------------------
# branch roots


def _roots_at(N: BiPoly, t0, precision) -> list:
    f = N.eval_t(t0)
    if f.degree < 1:
        return []
    return [float(iv.mid) for iv in isolate_real_roots(f, precision)]


def _disc(surface: ConstraintSurface):
    """Res_s(N, N_s), or None when its degree would exceed the exact budget."""
    N = surface.ncal
    m, d = N.degree_s, N.degree_t
    if m < 1 or (2 * m - 1) * d > _MAX_DISC_DEGREE:
        return None
    return resultant_in_s(N, N.diff_s())


def _float_roots(p: Poly):
    c = p.primitive_ints()
    big = max(abs(v) for v in c)
    # scale in integers first so huge coefficients stay representable
    shift = max(0, big.bit_length() - 1000)
    return np.roots([float(v >> shift) if v >= 0 else -float((-v) >> shift) for v in reversed(c)])


def _complex_branch_points(disc: Poly | None):
    """Non-real roots of disc.  Float roots near an exact real root count as real."""
    if disc is None or disc.is_zero() or disc.degree < 1:
        return np.zeros(0, dtype=complex)
    r = _float_roots(disc)
    real = np.array([float(iv.mid) for iv in isolate_real_roots(disc)])
    if len(real):
        tol = 1e-6 * (1.0 + np.abs(r.real))
        hit = np.abs(r[:, None] - real[None, :]).min(axis=1) < tol
        r = r[~hit]
    return r


def _near_branch_point(cplx, t1, t2) -> bool:
    """A complex branch point close to [t1, t2]: an avoided crossing of two branches."""
    w = float(t2 - t1)
    near = (cplx.real > float(t1) - w) & (cplx.real < float(t2) + w) & (np.abs(cplx.imag) < w)
    return bool(np.any(near))


def branch_roots(surface: ConstraintSurface, t1, t2, precision=DEFAULT_PRECISION, disc=False):
    """Root lists of N(t1, s) and N(t2, s) when [t1, t2] is free of branch points.

    Raises IncompatibleStrip when a vertical asymptote or a point with
    N = N_s = 0 might lie in the strip, or when root counts differ.  Pass
    ``disc`` (from ``_disc``) to reuse the resultant across strips.
    """
    t1, t2 = as_rat(t1), as_rat(t2)
    if not t1 < t2:
        raise ValueError("need t1 < t2")
    N = surface.ncal
    lc = N.lc_s()
    if lc.degree > 0 and has_root_in(lc, t1, t2):
        raise IncompatibleStrip("vertical asymptote inside the strip")
    if lc(t1) == 0 or lc(t2) == 0:
        raise IncompatibleStrip("vertical asymptote at a strip end")
    probes = [t1 + (t2 - t1) * k / (_PROBES + 1) for k in range(_PROBES + 2)]
    counts = [count_real_roots(N.eval_t(t)) if N.eval_t(t).degree > 0 else 0 for t in probes]
    if len(set(counts)) != 1:
        raise IncompatibleStrip("root counts change inside the strip")
    if disc is False:
        disc = _disc(surface)
    if disc is not None:
        if not disc.is_zero() and disc.degree > 0 and has_root_in(disc, t1, t2):
            raise IncompatibleStrip("branch point inside the strip")
    else:
        rows = [_roots_at(N, t, Fraction(1, 10 ** 10)) for t in probes]
        for a, b in zip(rows, rows[1:]):
            if not a:
                continue
            gaps = np.diff(a) if len(a) > 1 else np.array([np.inf])
            if np.max(np.abs(np.subtract(a, b))) >= 0.5 * float(np.min(gaps)):
                raise IncompatibleStrip("branches approach each other inside the strip")
    r1 = _roots_at(N, t1, precision)
    r2 = _roots_at(N, t2, precision)
    return BranchSample(float(t1), r1), BranchSample(float(t2), r2)


def _usable(c1: CurveParam, c2: CurveParam, pair) -> bool:
    """Every branch has finite, distinct witness points at both strip ends."""
    n1, n2 = NumCurve.from_curve(c1), NumCurve.from_curve(c2)
    for b in pair:
        p = n1.eval(b.t)
        if not (np.all(np.isfinite(p)) and np.linalg.norm(p) < _CLIP):
            return False
        q = n2.eval(np.array(b.roots, dtype=float)) if b.roots else np.zeros((0, 3))
        if not np.all(np.isfinite(q)):
            return False
        if len(q) and (np.linalg.norm(q, axis=1).max() >= _CLIP or np.linalg.norm(q - p, axis=1).min() < _LUCKY_TOL):
            return False
    return True


def find_strip(surface: ConstraintSurface, c1: CurveParam, precision=DEFAULT_PRECISION, c2: CurveParam | None = None):
    """First compatible strip in the fixed search order; None when none works.

    Strips near an avoided crossing, or with a branch ending on a pole of
    C2, are passed over on the first sweep and only used when nothing
    better exists.
    """
    W = c1.projective()[3]
    disc = _disc(surface)
    cplx = _complex_branch_points(disc)
    fallback = None
    for width in _STRIP_WIDTHS:
        for b in _STRIP_BASES:
            t1 = Fraction(b)
            t2 = t1 + width
            if W(t1) == 0 or W(t2) == 0:
                continue
            try:
                pair = branch_roots(surface, t1, t2, precision, disc=disc)
            except IncompatibleStrip:
                continue
            if not pair[0].count:
                continue
            if fallback is None:
                fallback = (t1, t2), pair
            if _near_branch_point(cplx, t1, t2):
                continue
            if c2 is not None and not _usable(c1, c2, pair):
                continue
            return (t1, t2), pair
    return fallback


# ---------------------------------------------------------------------------
# eye candidates


@dataclass
class EyeCandidate:
    branch: int
    eye: np.ndarray | None
    direction: np.ndarray | None
    gap: float
    s_pair: tuple
    notes: list = field(default_factory=list)


def approx_eye_candidates(c1: CurveParam, c2: CurveParam, pair) -> list[EyeCandidate]:
    b1, b2 = pair
    if b1.count != b2.count:
        raise IncompatibleStrip("unequal root counts")
    n1, n2 = NumCurve.from_curve(c1), NumCurve.from_curve(c2)
    p1 = n1.eval(b1.t)
    p2 = n1.eval(b2.t)
    out = []
    for i, (s1, s2) in enumerate(zip(b1.roots, b2.roots)):
        q1 = n2.eval(s1)
        q2 = n2.eval(s2)
        pts = (p1, q1, p2, q2)
        if not all(np.all(np.isfinite(p)) and np.linalg.norm(p) < _CLIP for p in pts):
            continue
        if np.linalg.norm(q1 - p1) < _LUCKY_TOL or np.linalg.norm(q2 - p2) < _LUCKY_TOL:
            continue
        # based at the C2 points, which usually sit nearer the eye
        L1 = NumLine(q1, q1 - p1)
        L2 = NumLine(q2, q2 - p2)
        try:
            eye, gap = pseudo_intersect_least_squares(L1, L2)
            out.append(EyeCandidate(i, eye, None, gap, (s1, s2)))
        except NearParallel:
            d1 = L1.direction / np.linalg.norm(L1.direction)
            d2 = L2.direction / np.linalg.norm(L2.direction)
            if d1 @ d2 < 0:
                d2 = -d2
            d = (d1 + d2) / 2.0
            gap = float(np.linalg.norm(np.cross(p2 - p1, d)))
            out.append(EyeCandidate(i, None, d / np.linalg.norm(d), gap, (s1, s2)))
    return out


# ---------------------------------------------------------------------------
# Hausdorff distance


def _samples(c: NumCurve, n: int):
    u = -1.0 + (2.0 * np.arange(n) + 1.0) / n
    pts = c.eval(param_chart(u))
    ok = np.all(np.isfinite(pts), axis=1) & (np.linalg.norm(np.where(np.isfinite(pts), pts, 0.0), axis=1) < _H_RADIUS)
    return u, pts, ok


def _foot_polys(b: NumCurve):
    """Ascending coefficient rows (F0, F1, F2, F3) with (b(s) - a) . b'(s) ~ F0 - sum a_i F_i."""
    P = np.polynomial.polynomial
    X = [np.trim_zeros(c, "b") if np.any(c) else np.zeros(1) for c in b.hom]
    W = X[3]
    dW = P.polyder(W) if len(W) > 1 else np.zeros(1)
    D = [P.polysub(P.polymul(P.polyder(x) if len(x) > 1 else np.zeros(1), W), P.polymul(x, dW)) for x in X[:3]]
    F0 = np.zeros(1)
    for x, d in zip(X[:3], D):
        F0 = P.polyadd(F0, P.polymul(x, d))
    rows = [F0] + [P.polymul(W, d) for d in D]
    n = max(len(r) for r in rows)
    return np.array([np.pad(r, (0, n - len(r))) for r in rows])


def _golden_chart_min(b: NumCurve, targets, lo, hi, iters: int = 64):
    """Like _golden_min, searching over the chart coordinate u in (-1, 1)."""

    class _Charted:
        def eval(self, u):
            return b.eval(param_chart(u))

    return _golden_min(_Charted(), targets, lo, hi, iters)


def _golden_min(b, targets, lo, hi, iters: int = 64):
    """Vectorized golden-section minimum of |b(s) - target| over s in [lo, hi]."""
    g = (np.sqrt(5.0) - 1.0) / 2.0

    def dist(s):
        with np.errstate(over="ignore", invalid="ignore"):
            d = np.linalg.norm(b.eval(s) - targets, axis=1)
        return np.where(np.isfinite(d), d, np.inf)

    x1 = hi - g * (hi - lo)
    x2 = lo + g * (hi - lo)
    f1, f2 = dist(x1), dist(x2)
    for _ in range(iters):
        left = f1 < f2
        hi = np.where(left, x2, hi)
        lo = np.where(left, lo, x1)
        xe = np.where(left, hi - g * (hi - lo), lo + g * (hi - lo))
        fe = dist(xe)
        x1, x2 = np.where(left, xe, x2), np.where(left, x1, xe)
        f1, f2 = np.where(left, fe, f2), np.where(left, f1, fe)
    return np.minimum(f1, f2)


def _batched_roots(coef):
    """Roots of many polynomials (ascending rows); NaN-padded rows.

    A leading coefficient below 1e-12 of the row maximum is a degree drop,
    not a huge root, so rows are grouped by effective degree.
    """
    n, m = coef.shape
    out = np.full((n, max(m - 1, 0)), np.nan + 0j)
    big = np.abs(coef) > 1e-12 * np.abs(coef).max(axis=1, keepdims=True)
    eff = np.where(big.any(axis=1), m - 1 - np.argmax(big[:, ::-1], axis=1), 0)
    for deg in np.unique(eff):
        if deg < 1:
            continue
        rows = np.nonzero(eff == deg)[0]
        c = coef[rows, : deg + 1] / coef[rows, deg, None]
        comp = np.zeros((len(rows), deg, deg))
        comp[:, 0, :] = -c[:, -2::-1]
        comp[:, np.arange(1, deg), np.arange(deg - 1)] = 1.0
        out[rows, :deg] = np.linalg.eigvals(comp)
    return out


def _critical_distances(a_pts, b: NumCurve):
    """Distance from each point to the nearest critical point of |b(s) - a| over real s.

    Critical parameters are the real roots of (b(s) - a) . b'(s).  Roots are
    only trusted as bracket centres: near a pole a tiny root error moves b(s)
    a long way, so each bracket is searched by golden section.  Every
    candidate is a genuine point of b, so the result never underestimates the
    true distance.
    """
    n = len(a_pts)
    out = np.full(n, np.inf)
    F = _foot_polys(b)
    coef = F[0][None, :] - a_pts @ F[1:]  # ascending, one row per point
    scale = np.abs(coef).max(axis=1, keepdims=True)
    scale[scale == 0] = 1.0
    R = _batched_roots(coef / scale)
    if R.shape[1] == 0:
        return out
    # clustered roots come out perturbed, possibly off the real axis
    real = np.where(np.abs(R.imag) <= 0.05 * (1.0 + np.abs(R.real)), R.real, np.nan)
    r = np.sort(real, axis=1)  # NaN last
    # the distance is monotone between consecutive critical points away from
    # poles: search each root up to the midpoints with its neighbours,
    # stopping at poles, and also in a narrow window around it
    pad = 1e-2 * (1.0 + np.abs(r))
    mids = (r[:, 1:] + r[:, :-1]) / 2.0
    lo = np.concatenate([np.full((n, 1), np.nan), mids], axis=1)
    hi = np.concatenate([mids, np.full((n, 1), np.nan)], axis=1)
    lo = np.where(np.isnan(lo), r - pad, lo)
    hi = np.where(np.isnan(hi), r + pad, hi)
    W = np.trim_zeros(b.hom[3], "b")
    poles = np.roots(W[::-1]) if len(W) > 1 else np.zeros(0)
    poles = np.sort(poles[np.abs(poles.imag) < 1e-9].real)
    if len(poles):
        k = np.searchsorted(poles, np.where(np.isnan(r), 0.0, r))
        lo = np.maximum(lo, np.where(k > 0, poles[np.maximum(k - 1, 0)], -np.inf))
        hi = np.minimum(hi, np.where(k < len(poles), poles[np.minimum(k, len(poles) - 1)], np.inf))
    w = 1e-4 * (1.0 + np.abs(r))
    good = ~np.isnan(r)
    rows = np.broadcast_to(np.arange(n)[:, None], r.shape)
    idx = np.concatenate([rows[good], rows[good]])
    if not len(idx):
        return out
    los = np.concatenate([lo[good], (r - w)[good]])
    his = np.concatenate([hi[good], (r + w)[good]])
    d = _golden_min(b, a_pts[idx], los, his)
    np.minimum.at(out, idx, d)
    return out


def _directed(a_pts, b: NumCurve, bu, b_pts, b_ok, iters: int = 64, chunk: int = 128):
    """max over a_pts of the distance to curve b.

    The cheap estimates bound the refined ones from above, so points are
    refined in decreasing order of their cheap estimate and the loop stops
    once no remaining point can raise the maximum.
    """
    if not len(a_pts):
        return 0.0
    if not b_ok.any():
        return float("inf")
    cheap = _point_distances(a_pts, b, bu, b_pts, b_ok, iters)
    order = np.argsort(-cheap, kind="stable")
    best = 0.0
    for start in range(0, len(order), chunk):
        idx = order[start : start + chunk]
        if cheap[idx[0]] <= best:
            break
        refined = np.minimum(cheap[idx], _critical_distances(a_pts[idx], b))
        best = max(best, float(refined.max()))
    return best


def _point_distances(a_pts, b: NumCurve, bu, b_pts, b_ok, iters: int = 64):
    """Upper bounds on each point's distance to b from samples and local search."""
    B = b_pts[b_ok]
    Bu = bu[b_ok]
    n = len(bu)
    best = np.empty(len(a_pts))
    lo = np.empty(len(a_pts))
    hi = np.empty(len(a_pts))
    step = 2.0 / n
    for start in range(0, len(a_pts), 256):
        chunk = a_pts[start : start + 256]
        d2 = ((chunk[:, None, :] - B[None, :, :]) ** 2).sum(axis=2)
        j = np.argmin(d2, axis=1)
        best[start : start + 256] = np.sqrt(d2[np.arange(len(chunk)), j])
        uj = Bu[j]
        lo[start : start + 256] = np.maximum(uj - step, -1.0 + 1e-15)
        hi[start : start + 256] = np.minimum(uj + step, 1.0 - 1e-15)
    # golden-section search on b's chart parameter around the nearest vertex
    refined = _golden_chart_min(b, a_pts, lo, hi, iters)
    best = np.minimum(best, refined)
    lim = b.limit_point()
    if lim is not None:
        best = np.minimum(best, np.linalg.norm(a_pts - lim, axis=1))
    return best


def _check_coplanar(pa, pb):
    pts = np.vstack([pa, pb])
    if len(pts) < 4:
        return
    centre = pts.mean(axis=0)
    q = pts - centre
    scale = max(1.0, float(np.abs(q).max()))
    sv = np.linalg.svd(q / scale, compute_uv=False)
    if sv[-1] > 1e-6 * np.sqrt(len(pts)):
        raise PlaneMismatch("the curves are not contained in one plane")


def hausdorff_estimate(a, b, n_samples: int = DEFAULT_SAMPLES) -> float:
    """Symmetric sampled Hausdorff distance between two planar curves.

    Each curve is sampled at ``n_samples`` parameters through the chart
    t = u/(1-u^2) on a uniform u-grid; every sample's distance to the other
    curve is refined by golden-section search on that curve's parameter.
    """
    if n_samples < 64:
        raise ValueError("n_samples must be at least 64")
    a = a if isinstance(a, NumCurve) else NumCurve.from_curve(a)
    b = b if isinstance(b, NumCurve) else NumCurve.from_curve(b)
    ua, pa, oka = _samples(a, n_samples)
    ub, pb, okb = _samples(b, n_samples)
    _check_coplanar(pa[oka], pb[okb])
    dab = _directed(pa[oka], b, ub, pb, okb)
    dba = _directed(pb[okb], a, ua, pa, oka)
    return max(dab, dba)


# ---------------------------------------------------------------------------
# end to end


class FloatPlane:
    def __init__(self, plane: Plane):
        self.vector = tuple(float(v) for v in plane.vector)


def float_plane(plane: Plane):
    return FloatPlane(plane)


def _rationalize(x: float, max_den: int = 10 ** 6, tol: float = 1e-8):
    r = Fraction(x).limit_denominator(max_den)
    return r if abs(float(r) - x) < tol else None


def promote(cand: ApproxFinding, c1: CurveParam, c2: CurveParam, plane: Plane):
    """Try to upgrade a numeric eye to an exactly certified finding."""
    if cand.eye is not None:
        vals = list(cand.eye)
        coords = [_rationalize(v) for v in vals]
        if any(v is None for v in coords):
            return None
        eye = ProjPoint((*coords, 1))
    else:
        d = cand.direction
        k = int(np.argmax(np.abs(d)))
        vals = d / d[k]
        coords = [_rationalize(float(v)) for v in vals]
        if any(v is None for v in coords):
            return None
        eye = ProjPoint((*coords, 0))
    try:
        P = build_projection_matrix(eye, plane)
    except CurveprojError:
        return None
    X = c1.projective()
    Y = c2.projective()
    img = [sum((X[j] * P[i, j] for j in range(4) if P[i, j]), Poly()) for i in range(4)]
    nij = []
    for i in range(4):
        for j in range(i + 1, 4):
            n = BiPoly.outer(img[i], Y[j]) - BiPoly.outer(img[j], Y[i])
            if not n.is_zero():
                nij.append(n)
    if not nij:
        return None
    G = bipoly_gcd_many(nij)
    if G.degree_s != 1:
        return None
    g0, g1 = G.coeffs_in_s()
    psi = RatFun(-g0, g1)
    if psi.degree < 1:
        return None
    try:
        finding = certify_exact(psi, eye, c1, c2, plane)
    except Rejected:
        return None
    finding.extra["gcd_witness"] = G
    return finding


def detect_approx(
    c1: CurveParam,
    c2: CurveParam,
    epsilon: float = DEFAULT_EPSILON,
    n_samples: int = DEFAULT_SAMPLES,
    precision=DEFAULT_PRECISION,
    surface: ConstraintSurface | None = None,
    do_promote: bool = True,
) -> list[ApproxFinding]:
    plane, _ = plane_of_curve(c2)
    if surface is None:
        surface = compute_constraint_surface(c1, c2)
    found = find_strip(surface, c1, precision, c2)
    if found is None:
        return []
    (t1, t2), pair = found
    n1 = NumCurve.from_curve(c1)
    n2 = NumCurve.from_curve(c2)
    fplane = float_plane(plane)
    out = []
    for cand in approx_eye_candidates(c1, c2, pair):
        if cand.eye is not None:
            pt = ProjPoint((*cand.eye, 1.0))
        else:
            pt = ProjPoint((*cand.direction, 0.0))
        try:
            P = build_projection_matrix(pt, fplane).to_numpy()
        except CurveprojError:
            continue
        img = n1.project(P)
        try:
            H = hausdorff_estimate(img, n2, n_samples)
        except PlaneMismatch:
            H = float("inf")
        f = ApproxFinding(
            eye=cand.eye,
            direction=cand.direction,
            gap=cand.gap,
            hausdorff=H,
            accepted=bool(H < epsilon),
            epsilon=epsilon,
            branch=cand.branch,
            s_pair=cand.s_pair,
            t_pair=(float(t1), float(t2)),
        )
        if f.accepted and do_promote:
            f.promoted = promote(f, c1, c2, plane)
        out.append(f)
    return out
