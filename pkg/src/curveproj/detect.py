"""Exact detection: constraint surface, rational psi recovery, certification.

Pipeline for a space curve C1 and a planar curve C2:

1. build the constraint surface N(t, s), the square-free numerator of
   det[x1(t) - x2(s); x1'(t); x2'(s)];
2. recover every rational psi whose graph p(t) - s q(t) divides N, by lifting
   rational roots of N(t0, s) to power series and Pade-reconstructing them;
3. for each psi pick two admissible parameters, intersect the lines through
   x1(t) and x2(psi(t)), and certify the resulting eye symbolically.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations

from .curves import CurveParam, fiber_poly, is_line, plane_of_curve, point_at_infinity, tracing_index
from .errors import (
    CoplanarCurves,
    CurveprojError,
    EyeOnPlane,
    IdenticalPoints,
    ImproperParametrization,
    LineInput,
    NoCommonEye,
    Rejected,
)
from .geometry import (
    IDENTICAL,
    SKEW,
    Plane,
    ProjMatrix,
    ProjPoint,
    build_projection_matrix,
    intersect_lines_exact,
    line_through,
)
from .ratfun import (
    BiPoly,
    Poly,
    RatFun,
    as_rat,
    bipoly_divide,
    is_squarefree_poly,
    pade,
    poly_gcd,
    poly_gcd_many,
    rational_roots,
    squarefree_part,
)
from .ratfun.interp import series_inv, series_mul

# integer abscissas tried before falling back to seeded random rationals
_MAX_INT_SAMPLES = 64
DEFAULT_SEED = 20240601


@dataclass
class ConstraintSurface:
    ncal: BiPoly
    excluded_t: frozenset
    excluded_poly: Poly
    raw_degrees: tuple = (0, 0)

    @property
    def deg_t(self) -> int:
        return self.ncal.degree_t

    @property
    def deg_s(self) -> int:
        return self.ncal.degree_s


@dataclass
class UnluckySet:
    """Excluded parameters: roots of ``poly`` plus the per-sample tests in ``admits``."""

    poly: Poly
    c2: CurveParam
    psi: RatFun
    ncal: BiPoly
    rationals: frozenset = frozenset()

    def admits(self, t0) -> bool:
        t0 = as_rat(t0)
        if self.poly(t0) == 0:
            return False
        s0 = self.psi(t0)
        # (iii) x2(s0) is a simple point of C2 reached by one parameter only
        if fiber_poly(self.c2, s0).degree != 1:
            return False
        if self.c2.point(s0) == point_at_infinity(self.c2) and self.c2.degree > 0:
            return False
        # (iv) the vertical line t = t0 avoids the singular points of N
        f = self.ncal.eval_t(t0)
        g = poly_gcd_many([f, self.ncal.diff_t().eval_t(t0), self.ncal.diff_s().eval_t(t0)])
        return g.degree < 1


@dataclass
class PsiCandidate:
    psi: RatFun
    g: BiPoly
    divisibility_ok: bool
    unlucky_t: UnluckySet | None = None

    @property
    def degree(self) -> int:
        return self.psi.degree


@dataclass
class ProjectionFinding:
    eye: ProjPoint
    kind: str
    degenerate: bool
    psi: RatFun
    certification: str
    matrix: ProjMatrix
    hausdorff: float | None = None
    lam: RatFun | None = None
    psi_inverse: RatFun | None = None
    samples: tuple = ()
    extra: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# constraint surface


def raw_numerator(c1: CurveParam, c2: CurveParam) -> BiPoly:
    """Numerator of the triple product det[x1 - x2; x1'; x2'] over W^3 V^3."""
    X = c1.projective()
    Y = c2.projective()
    W, V = X[3], Y[3]
    dW, dV = W.deriv(), V.deriv()
    b = [X[i].deriv() * W - X[i] * dW for i in range(3)]
    c = [Y[i].deriv() * V - Y[i] * dV for i in range(3)]
    R = BiPoly()
    for perm in permutations(range(3)):
        i, j, k = perm
        sign = _perm_sign(perm)
        # a_i = X_i(t) V(s) - Y_i(s) W(t)
        term = BiPoly.outer(X[i] * b[j], V * c[k]) - BiPoly.outer(W * b[j], Y[i] * c[k])
        R = R + term if sign > 0 else R - term
    return R


def _perm_sign(p) -> int:
    sgn = 1
    p = list(p)
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                sgn = -sgn
    return sgn


def compute_constraint_surface(c1: CurveParam, c2: CurveParam) -> ConstraintSurface:
    if is_line(c1) or is_line(c2):
        raise LineInput("straight lines are not accepted as input curves")
    R = raw_numerator(c1, c2)
    if R.is_zero():
        raise CoplanarCurves("the curves lie in one plane; the constraint surface vanishes")
    W = c1.projective()[3]
    V = c2.projective()[3]
    raw_deg = (R.degree_t, R.degree_s)
    ct = R.content_t()
    gt = poly_gcd(ct, W ** 3)
    if gt.degree > 0:
        R = R.div_poly_t(gt)
    cs = R.content_s()
    gs = poly_gcd(cs, V ** 3)
    if gs.degree > 0:
        R = R.div_poly_s(gs)
    N = squarefree_part(R)
    if N.is_constant():
        raise CoplanarCurves("the constraint surface is trivial")
    lc = N.lc_s()
    excl_poly = W * lc if not lc.is_zero() else W
    excluded = frozenset(rational_roots(excl_poly)) if excl_poly.degree > 0 else frozenset()
    return ConstraintSurface(N, excluded, excl_poly, raw_deg)


# ---------------------------------------------------------------------------
# psi recovery


def _series_eval(rows, S, k, deriv=False):
    """F(tau, S(tau)) mod tau^k, F given by its s-coefficient series ``rows``."""
    m = len(rows) - 1
    if deriv:
        rows = [[v * j for v in rows[j]] for j in range(1, m + 1)]
        m -= 1
        if m < 0:
            return [Fraction(0)] * k
    acc = list(rows[m][:k]) + [Fraction(0)] * (k - len(rows[m][:k]))
    for j in range(m - 1, -1, -1):
        acc = series_mul(acc, S, k)
        r = rows[j]
        for i in range(min(k, len(r))):
            acc[i] += r[i]
    return acc


def lift_root(F: BiPoly, s0: Fraction, K: int):
    """Power series s(tau) with F(tau, s(tau)) = 0, s(0) = s0, to K terms.

    Requires s0 to be a simple root of F(0, s).
    """
    rows = [list(c.coeffs) for c in F.coeffs_in_s()]
    S = [as_rat(s0)]
    k = 1
    while k < K:
        k = min(2 * k, K)
        S = S + [Fraction(0)] * (k - len(S))
        f = _series_eval(rows, S, k)
        fs = _series_eval(rows, S, k, deriv=True)
        corr = series_mul(f, series_inv(fs, k), k)
        S = [a - b for a, b in zip(S, corr)]
    return S


def _choose_base_point(N: BiPoly, seed: int = DEFAULT_SEED):
    lc = N.lc_s()
    for t0 in range(_MAX_INT_SAMPLES):
        if lc(t0) == 0:
            continue
        if is_squarefree_poly(N.eval_t(t0)):
            return Fraction(t0)
    rng = random.Random(seed)
    for _ in range(200):
        t0 = Fraction(rng.randint(-1000, 1000), rng.randint(1, 97))
        if lc(t0) != 0 and is_squarefree_poly(N.eval_t(t0)):
            return t0
    raise CurveprojError("no admissible base abscissa for root lifting")


def graph_poly(psi: RatFun) -> BiPoly:
    """G(t, s) = p(t) - s q(t), normalized."""
    return BiPoly.linear_in_s(psi.num, psi.den).normalized()


def rational_psi_candidates(surface: ConstraintSurface, seed: int = DEFAULT_SEED) -> list[PsiCandidate]:
    """All rational psi of degree >= 1 with p(t) - s q(t) dividing N."""
    N = surface.ncal
    if N.degree_s < 1 or N.degree_t < 1:
        return []
    D = N.degree_t
    t0 = _choose_base_point(N, seed)
    roots = rational_roots(N.eval_t(t0))
    F = N.shift_t(t0)
    K = 2 * D + 2
    out = []
    seen = set()
    for s0 in roots:
        series = lift_root(F, s0, K)
        f = pade(series, D, D)
        if f is None:
            continue
        shift = Poly([-t0, 1])
        psi = RatFun(f.num.compose(shift), f.den.compose(shift))
        if psi.degree < 1 or psi in seen:
            continue
        G = graph_poly(psi)
        if bipoly_divide(N, G) is None:
            continue
        seen.add(psi)
        out.append(PsiCandidate(psi, G, True))
    out.sort(key=_psi_key)
    return out


def _psi_key(c):
    psi = c.psi if isinstance(c, PsiCandidate) else c
    return (psi.degree, psi.num.coeffs, psi.den.coeffs)


# ---------------------------------------------------------------------------
# lucky pairs


def _hom_compose(c: CurveParam, psi: RatFun):
    """q^n x~(p/q) for the projective tuple of c, n its degree."""
    Y = c.projective()
    n = max(p.degree for p in Y)
    return tuple(p.homogenize(psi.den, psi.num, n) for p in Y)


def _minors(a, b):
    out = []
    for i in range(4):
        for j in range(i + 1, 4):
            m = a[i] * b[j] - a[j] * b[i]
            if not m.is_zero():
                out.append(m)
    return out


def unlucky_params(psi: PsiCandidate, c1: CurveParam, c2: CurveParam, surface: ConstraintSurface) -> UnluckySet:
    f = psi.psi
    W = c1.projective()[3]
    V = c2.projective()[3]
    parts = [W, f.den, V.homogenize(f.den, f.num, V.degree)]
    # x1(t) = x2(psi(t)) only at the roots of the gcd of the coincidence minors
    X = c1.projective()
    Y2 = _hom_compose(c2, f)
    mins = _minors(X, Y2)
    if not mins:
        raise Rejected("the curves coincide along psi")
    g = poly_gcd_many(mins)
    if g.degree > 0:
        parts.append(g)
    P = Poly.const(1)
    for p in parts:
        if p.degree > 0:
            P = P * p
    rats = frozenset(rational_roots(P)) if P.degree > 0 else frozenset()
    return UnluckySet(P, c2, f, surface.ncal, rats)


def admissible_params(unlucky: UnluckySet, count: int = 2, seed: int = DEFAULT_SEED):
    """First ``count`` admissible parameters: 0, 1, 2, ..., then negatives, then seeded rationals."""
    found = []
    k = 0
    order = list(range(_MAX_INT_SAMPLES)) + [-i for i in range(1, _MAX_INT_SAMPLES)]
    for v in order:
        if unlucky.admits(v):
            found.append(Fraction(v))
            if len(found) == count:
                return found
    rng = random.Random(seed)
    while len(found) < count and k < 1000:
        k += 1
        v = Fraction(rng.randint(-1000, 1000), rng.randint(2, 97))
        if v not in found and unlucky.admits(v):
            found.append(v)
    return found


def eye_from_lucky_pairs(psi, c1: CurveParam, c2: CurveParam, t1, t2) -> ProjPoint:
    f = psi.psi if isinstance(psi, PsiCandidate) else psi
    t1, t2 = as_rat(t1), as_rat(t2)
    if t1 == t2:
        raise ValueError("the two parameters must differ")
    L = []
    for tj in (t1, t2):
        p = c1.point(tj)
        q = c2.point(f(tj))
        L.append(line_through(p, q))
    res = intersect_lines_exact(L[0], L[1])
    if res is SKEW:
        raise NoCommonEye("the witness lines are skew", reason="Skew")
    if res is IDENTICAL:
        raise NoCommonEye("the witness lines coincide", reason="Identical")
    return res


# ---------------------------------------------------------------------------
# certification


def _lambda(c1: CurveParam, c2: CurveParam, psi: RatFun, eye: ProjPoint):
    a = eye.coords
    x1 = c1.components
    x2 = [comp.compose(psi) for comp in c2.components]
    lam = None
    for i in range(3):
        num = x2[i] - x1[i]
        den = x1[i] * a[3] - RatFun.const(a[i])
        if den.is_zero():
            if not num.is_zero():
                return None
            continue
        r = num / den
        if lam is None:
            lam = r
        elif r != lam:
            return None
    return lam


def certify_exact(psi, eye: ProjPoint, c1: CurveParam, c2: CurveParam, plane: Plane | None = None) -> ProjectionFinding:
    cand = psi if isinstance(psi, PsiCandidate) else PsiCandidate(psi, graph_poly(psi), True)
    f = cand.psi
    if not eye.exact:
        raise Rejected("eye point is not rational")
    if plane is None:
        plane = plane_of_curve(c2)[0]
    try:
        P = build_projection_matrix(eye, plane)
    except EyeOnPlane:
        raise Rejected("eye lies on the plane of C2") from None
    X = c1.projective()
    img = tuple(sum((X[j] * P[i, j] for j in range(4) if P[i, j]), Poly()) for i in range(4))
    if all(p.is_zero() for p in img):
        raise Rejected("C1 collapses under the projection")
    target = _hom_compose(c2, f)
    identity_ok = not _minors(img, target)
    lam = _lambda(c1, c2, f, eye)
    ratio_ok = lam is not None
    # gcd witness: G divides every n_ij(t, s) = img_i(t) Y_j(s) - img_j(t) Y_i(s)
    Y = c2.projective()
    witness_ok = True
    if identity_ok:
        for i in range(4):
            for j in range(i + 1, 4):
                n_ij = BiPoly.outer(img[i], Y[j]) - BiPoly.outer(img[j], Y[i])
                if not n_ij.is_zero() and bipoly_divide(n_ij, cand.g) is None:
                    witness_ok = False
                    break
            if not witness_ok:
                break
    if not identity_ok:
        raise Rejected("P x1(t) is not proportional to x2(psi(t))")
    if not ratio_ok:
        raise Rejected("ratio identity for lambda fails")
    if not witness_ok:
        raise Rejected("gcd image-equality witness fails")
    kind = "parallel" if eye.at_infinity else "perspective"
    degenerate = f.degree >= 2
    inv = f.mobius_inverse() if not degenerate else None
    return ProjectionFinding(
        eye=eye,
        kind=kind,
        degenerate=degenerate,
        psi=f,
        certification="exact",
        matrix=P,
        lam=lam,
        psi_inverse=inv,
    )


# ---------------------------------------------------------------------------
# orchestration


def validate_inputs(c1: CurveParam, c2: CurveParam) -> Plane:
    if is_line(c1) or is_line(c2):
        raise LineInput("straight lines are not accepted as input curves")
    plane, _ = plane_of_curve(c2)
    for lbl, c in (("C1", c1), ("C2", c2)):
        if tracing_index(c) != 1:
            raise ImproperParametrization(f"{lbl} is not properly parametrized")
    return plane


def certify_candidate(cand: PsiCandidate, c1, c2, surface, plane, seed: int = DEFAULT_SEED):
    """Find an eye for one candidate and certify it; raises Rejected or NoCommonEye."""
    cand.unlucky_t = unlucky_params(cand, c1, c2, surface)
    ts = admissible_params(cand.unlucky_t, count=6, seed=seed)
    if len(ts) < 2:
        raise Rejected("no admissible parameters")
    t1 = ts[0]
    last = None
    for t2 in ts[1:]:
        try:
            eye = eye_from_lucky_pairs(cand, c1, c2, t1, t2)
        except NoCommonEye as exc:
            last = exc
            if exc.reason == "Skew":
                raise
            continue
        except IdenticalPoints as exc:
            last = exc
            continue
        finding = certify_exact(cand, eye, c1, c2, plane)
        finding.samples = (t1, t2)
        return finding
    raise last or Rejected("no usable parameter pair")


def run_exact(c1: CurveParam, c2: CurveParam, surface: ConstraintSurface | None = None, seed: int = DEFAULT_SEED):
    """Findings plus the rejected (psi, reason) pairs, both in psi order."""
    plane = validate_inputs(c1, c2)
    if surface is None:
        surface = compute_constraint_surface(c1, c2)
    findings, rejected = [], []
    for cand in rational_psi_candidates(surface, seed):
        try:
            findings.append(certify_candidate(cand, c1, c2, surface, plane, seed))
        except (Rejected, NoCommonEye) as exc:
            rejected.append((cand.psi, exc.reason))
    return findings, rejected


def detect_exact(c1: CurveParam, c2: CurveParam, seed: int = DEFAULT_SEED) -> list[ProjectionFinding]:
    return run_exact(c1, c2, seed=seed)[0]
