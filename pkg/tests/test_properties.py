"""Hypothesis property tests for the algebraic and geometric invariants."""
import random
from fractions import Fraction

from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from curveproj.curves import CurveParam, plane_of_curve, point_at_infinity, tracing_index
from curveproj.detect import compute_constraint_surface
from curveproj.errors import CoplanarCurves, CurveprojError, EyeOnPlane
from curveproj.geometry import Plane, ProjPoint, apply_projection, build_projection_matrix, eye_from_matrix
from curveproj.numeric import hausdorff_estimate
from curveproj.parser import parse_ratfun_expr
from curveproj.ratfun import (
    BiPoly,
    Poly,
    RatFun,
    bipoly_divide,
    bipoly_gcd_many,
    isolate_real_roots,
    ratfun_reconstruct,
    rational_roots,
    squarefree_part,
)
from synth import rand_curve, rand_mobius

small = st.integers(-6, 6)
rats = st.builds(Fraction, st.integers(-20, 20), st.integers(1, 6))


def polys(max_deg=4, coeffs=small):
    return st.lists(coeffs, min_size=1, max_size=max_deg + 1).map(Poly)


nonzero_polys = polys().filter(lambda p: not p.is_zero())
ratfuns = st.builds(RatFun, polys(), nonzero_polys)


@st.composite
def bipolys(draw, max_deg=3):
    terms = draw(st.dictionaries(st.tuples(st.integers(0, max_deg), st.integers(0, max_deg)), st.integers(-4, 4), max_size=6))
    return BiPoly({k: Fraction(v) for k, v in terms.items()})


# -- ratfun


@given(ratfuns)
def test_ratfun_normalization_idempotent(f):
    assert RatFun(f.num, f.den) == f
    assert RatFun(f.num, f.den).num.coeffs == f.num.coeffs


@settings(max_examples=60, deadline=None)
@given(bipolys(), bipolys())
def test_squarefree_part_divides_and_is_squarefree(a, b):
    f = a * b * b
    assume(not f.is_zero() and not f.is_constant())
    g = squarefree_part(f)
    assert bipoly_divide(f, g) is not None
    h = bipoly_gcd_many([g, g.diff_s(), g.diff_t()])
    assert h.is_constant()


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(-30, 30), min_size=2, max_size=9).map(Poly).filter(lambda p: p.degree >= 1))
def test_rational_roots_inside_isolating_intervals(f):
    ivs = isolate_real_roots(f, Fraction(1, 10**6))
    for r in rational_roots(f):
        assert f(r) == 0
        assert any(iv.lo <= r <= iv.hi for iv in ivs)


nine_bit = st.integers(-255, 255)


@settings(max_examples=200, deadline=None)
@given(polys(5, nine_bit), polys(5, nine_bit).filter(lambda p: not p.is_zero()))
def test_reconstruction_exact_from_twelve_samples(num, den):
    f = RatFun(num, den)
    assume(f.degree <= 5)
    ts = [Fraction(k) for k in range(-30, 30) if den(k) != 0][:12]
    assert ratfun_reconstruct([(t, f(t)) for t in ts], 5) == f


# -- parser


@settings(max_examples=200)
@given(ratfuns)
def test_pretty_parse_pretty_fixed_point(f):
    text = f.pretty("t")
    assert parse_ratfun_expr(text).pretty("t") == text
    assert parse_ratfun_expr(text) == f


@given(ratfuns, st.integers(0, 3))
def test_parse_ignores_whitespace_and_parentheses(f, n):
    text = f.pretty("t")
    assert parse_ratfun_expr("(" * n + " " + text.replace("*", " * ") + " " + ")" * n) == f


# -- curves


seeds = st.integers(0, 10**6)


@settings(max_examples=50, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(seeds)
def test_tracing_index_mobius_invariant(seed):
    rng = random.Random(seed)
    c = rand_curve(rng, 3)
    m = rand_mobius(rng)
    assert tracing_index(c.compose(m)) == tracing_index(c) == 1


@given(seeds, nonzero_polys)
def test_point_at_infinity_ignores_polynomial_factor(seed, f):
    c = rand_curve(random.Random(seed), 3)
    X = c.projective()
    scaled = CurveParam(*(RatFun(X[i] * f, X[3] * f) for i in range(3)))
    assert point_at_infinity(scaled) == point_at_infinity(c)


# -- geometry


@st.composite
def eye_and_plane(draw):
    v = draw(st.lists(rats, min_size=4, max_size=4).filter(any))
    p = draw(st.lists(small, min_size=4, max_size=4).filter(lambda q: any(q[:3])))
    eye, plane = ProjPoint(v), Plane(*p)
    assume(plane.evaluate(eye) != 0)
    return eye, plane


@given(eye_and_plane())
def test_matrix_kernel_rank_and_round_trip(ep):
    eye, plane = ep
    P = build_projection_matrix(eye, plane)
    assert not any(P.apply(eye.coords))
    assert P.rank() == 3
    assert eye_from_matrix(P) == eye
    assert P.kind == ("parallel" if eye.at_infinity else "perspective")


@settings(max_examples=40, deadline=None)
@given(seeds, eye_and_plane())
def test_projected_curve_lies_in_target_plane(seed, ep):
    eye, plane = ep
    c = rand_curve(random.Random(seed), 3)
    try:
        img = apply_projection(build_projection_matrix(eye, plane), c)
        found, _ = plane_of_curve(img)
    except CurveprojError:
        return
    assert found == plane


# -- detect


@settings(max_examples=20, deadline=None)
@given(seeds, st.integers(-3, 3), st.integers(-3, 3), st.integers(1, 3), st.integers(-4, 4))
def test_same_plane_pairs_are_coplanar(seed, A, B, C, D):
    rng = random.Random(seed)
    plane = Plane(A, B, C, D)

    def in_plane(var):
        x = RatFun(Poly([rng.randint(-4, 4), rng.randint(-4, 4), 1]))
        y = RatFun(Poly([rng.randint(-4, 4), 1]))
        z = (RatFun.const(-D) - x * A - y * B) * RatFun.const(Fraction(1, C))
        return CurveParam(x, y, z, variable=var)

    a, b = in_plane("t"), in_plane("s")
    assume(a.components != b.components)
    try:
        compute_constraint_surface(a, b)
    except CoplanarCurves:
        return
    raise AssertionError("same-plane pair was not reported as coplanar")


# -- numeric


@settings(max_examples=15, deadline=None)
@given(seeds, st.integers(-3, 3), st.integers(1, 4))
def test_hausdorff_symmetric(seed, shift, scale):
    rng = random.Random(seed)
    x = RatFun(Poly([rng.randint(-3, 3), rng.randint(-3, 3), 1]), Poly([1, 0, 1]))
    y = RatFun(Poly([rng.randint(-3, 3), 1]), Poly([1, 0, 1]))
    a = CurveParam(x, y, RatFun.const(0))
    b = CurveParam(x * scale + shift, y, RatFun.const(0))
    h1, h2 = hausdorff_estimate(a, b, 128), hausdorff_estimate(b, a, 128)
    assert h1 == h2 and h1 >= 0
    assert hausdorff_estimate(a, a, 128) == 0.0
