from fractions import Fraction

import numpy as np
import pytest

from curveproj.curves import plane_of_curve
from curveproj.errors import BadRank, CollapsesToPoint, EyeOnPlane, IdenticalPoints, NearParallel
from curveproj.geometry import (
    IDENTICAL,
    SKEW,
    Line3,
    NumLine,
    Plane,
    ProjMatrix,
    ProjPoint,
    apply_projection,
    build_projection_matrix,
    eye_from_matrix,
    intersect_lines_exact,
    line_through,
    projection_plane_of,
    pseudo_intersect_least_squares,
)
from curveproj.numeric import branch_roots
from curveproj.detect import compute_constraint_surface
from curveproj.parser import parse_curve
from curveproj.ratfun import RatFun, Poly
from conftest import fixture_pair

EXFIN_P = [[-2, 1, 1, 0], [1, -2, 1, 0], [1, 1, -2, 0], [1, 1, 1, -3]]
EXAMPLE2_P = [[0, 1, 1, 0], [1, 0, 1, 0], [-1, -1, 2, 0], [1, 1, 1, -1]]


def test_exfin_matrix_exact():
    P = build_projection_matrix(ProjPoint((1, 1, 1, 1)), Plane(1, 1, 1, 0))
    assert P == ProjMatrix(EXFIN_P)
    assert P.rank() == 3 and P.kind == "perspective"


def test_z_drop_matrix():
    P = build_projection_matrix(ProjPoint((0, 0, 1, 0)), Plane(0, 0, 1, 0))
    assert P.apply_point(ProjPoint.affine(3, 4, 5)) == ProjPoint.affine(3, 4, 0)
    assert P.kind == "parallel"
    assert eye_from_matrix(P) == ProjPoint((0, 0, 1, 0))


def test_example2_matrix_up_to_scale():
    _, c2 = fixture_pair("example2")
    plane, _ = plane_of_curve(c2)
    P = build_projection_matrix(ProjPoint.affine(1, 1, -1), plane)
    printed = ProjMatrix(EXAMPLE2_P)
    # the printed entry (3, 3) has the wrong sign: it does not annihilate the eye
    assert any(printed.apply((1, 1, -1, 1)))
    fixed = [list(r) for r in EXAMPLE2_P]
    fixed[2][2] = -2
    assert P.same_projectively(ProjMatrix(fixed))
    assert not any(P.apply((1, 1, -1, 1)))


def test_eye_on_plane_rejected():
    with pytest.raises(EyeOnPlane):
        build_projection_matrix(ProjPoint.affine(1, -1, 0), Plane(1, 1, 1, 0))


def test_eye_from_exfin_matrix():
    assert eye_from_matrix(ProjMatrix(EXFIN_P)) == ProjPoint((1, 1, 1, 1))


def test_eye_from_matrix_bad_rank():
    with pytest.raises(BadRank):
        eye_from_matrix(ProjMatrix([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]))


def test_eye_round_trip_random():
    rng = np.random.default_rng(7)
    for _ in range(100):
        coords = [Fraction(int(v), int(d)) for v, d in zip(rng.integers(-9, 10, 4), rng.integers(1, 6, 4))]
        if not any(coords):
            continue
        e = ProjPoint(coords)
        try:
            plane = Plane(*[Fraction(int(v)) for v in rng.integers(-5, 6, 4)])
            P = build_projection_matrix(e, plane)
        except (EyeOnPlane, ValueError):
            continue
        assert eye_from_matrix(P) == e
        assert projection_plane_of(P) == plane


def test_z_drop_applied_to_parabola_curve():
    c = parse_curve({"variable": "t", "x": "t", "y": "t^2", "z": "1/t"})
    P = build_projection_matrix(ProjPoint((0, 0, 1, 0)), Plane(0, 0, 1, 0))
    img = apply_projection(P, c)
    assert img.components == (RatFun.x(), RatFun(Poly([0, 0, 1])), RatFun.const(0))


def test_exfin_projection_reproduces_c2_as_point_set():
    c1, c2 = fixture_pair("exfin")
    img = apply_projection(ProjMatrix(EXFIN_P), c1)
    # psi(t) = t: the images agree parameter by parameter
    for t in (Fraction(-3), Fraction(1, 2), Fraction(2), Fraction(7, 3)):
        assert img.point(t) == c2.point(t)
    assert plane_of_curve(img)[0] == Plane(1, 1, 1, 0)


def test_line_through_eye_collapses():
    line = parse_curve({"variable": "t", "x": "1+t", "y": "1+2*t", "z": "1-t"})
    with pytest.raises(CollapsesToPoint):
        apply_projection(ProjMatrix(EXFIN_P), line)


def test_line_through_points():
    L = line_through(ProjPoint.affine(0, 0, 0), ProjPoint.affine(1, 1, 1))
    assert L.base == (0, 0, 0) and L.direction == (1, 1, 1)
    V = line_through(ProjPoint.affine(2, 3, 4), ProjPoint((0, 0, 1, 0)))
    assert V.direction == (0, 0, 1)
    with pytest.raises(IdenticalPoints):
        line_through(ProjPoint.affine(1, 2, 3), ProjPoint((2, 4, 6, 2)))


def _example2_line(t):
    c1, c2 = fixture_pair("example2")
    psi = RatFun(Poly([1, -1]), Poly([1, 1]))
    return line_through(c1.point(t), c2.point(psi(t)))


def test_example2_lines_meet_at_eye():
    L1, L2 = _example2_line(Fraction(3)), _example2_line(Fraction(4))
    assert L1.contains((1, 1, -1))
    assert intersect_lines_exact(L1, L2) == ProjPoint.affine(1, 1, -1)


def test_parallel_and_identical_lines():
    a = Line3((0, 0, 0), (0, 0, 1))
    b = Line3((1, 0, 0), (0, 0, 2))
    assert intersect_lines_exact(a, b) == ProjPoint((0, 0, 1, 0))
    assert intersect_lines_exact(a, Line3((0, 0, 5), (0, 0, -3))) is IDENTICAL


def test_cone_psi2_lines_are_skew():
    c1, c2 = fixture_pair("cone")
    num = Poly([160, 544, 684, 330, 34, -9, -1])
    den = Poly([16, 16, 6, 1]) * 5
    psi2 = RatFun(num, den)
    lines = [line_through(c1.point(t), c2.point(psi2(t))) for t in (Fraction(0), Fraction(1))]
    assert intersect_lines_exact(*lines) is SKEW


def test_least_squares_exact_meet():
    L1 = NumLine(np.array([0.0, 0.0, 0.0]), np.array([1.0, 2.0, 3.0]))
    L2 = NumLine(np.array([1.0, 0.0, 0.0]), np.array([0.0, 2.0, 3.0]))
    p, gap = pseudo_intersect_least_squares(L1, L2)
    assert np.allclose(p, [1, 2, 3]) and gap < 1e-12


def test_least_squares_parallel_raises():
    L1 = NumLine(np.zeros(3), np.array([1.0, 0.0, 0.0]))
    L2 = NumLine(np.ones(3), np.array([2.0, 0.0, 0.0]))
    with pytest.raises(NearParallel):
        pseudo_intersect_least_squares(L1, L2)


def test_least_squares_midpoint_anchor():
    L1 = NumLine(np.array([0.0, 0.0, 0.0]), np.array([1.0, 0.0, 0.0]))
    L2 = NumLine(np.array([0.0, 0.0, 1.0]), np.array([0.0, 1.0, 0.0]))
    p, gap = pseudo_intersect_least_squares(L1, L2, anchor="midpoint")
    assert np.allclose(p, [0, 0, 0.5]) and abs(gap - 1) < 1e-12
    p, _ = pseudo_intersect_least_squares(L1, L2)
    assert np.allclose(p, [0, 0, 0])


def _perturbed_lines(branch):
    c1, c2 = fixture_pair("exfin_perturbed")
    surface = compute_constraint_surface(c1, c2)
    b1, b2 = branch_roots(surface, 1, Fraction(3, 2))
    out = []
    for t, s in ((b1.t, b1.roots[branch]), (b2.t, b2.roots[branch])):
        p = c1.eval_float(t)[0]
        q = c2.eval_float(s)[0]
        out.append(NumLine(q, q - p))
    return out


def test_exfin_perturbed_good_eye():
    p, gap = pseudo_intersect_least_squares(*_perturbed_lines(3))
    assert np.all(np.abs(p - [0.998393660, 0.998630969, 0.9998988141]) < 1e-5)


def test_exfin_perturbed_decoy_point():
    p, gap = pseudo_intersect_least_squares(*_perturbed_lines(2))
    assert np.all(np.abs(p - [13.96606371, 26.47971848, -6.649856672]) < 1e-3)


def test_exact_and_least_squares_agree_on_random_pairs():
    rng = np.random.default_rng(11)
    done = 0
    while done < 100:
        m = [Fraction(int(v), int(d)) for v, d in zip(rng.integers(-20, 21, 3), rng.integers(1, 9, 3))]
        d1 = tuple(Fraction(int(v)) for v in rng.integers(-5, 6, 3))
        d2 = tuple(Fraction(int(v)) for v in rng.integers(-5, 6, 3))
        if not any(d1) or not any(d2):
            continue
        b1 = tuple(a - 2 * d for a, d in zip(m, d1))
        b2 = tuple(a + 3 * d for a, d in zip(m, d2))
        L1, L2 = Line3(b1, d1), Line3(b2, d2)
        exact = intersect_lines_exact(L1, L2)
        if not isinstance(exact, ProjPoint) or exact.at_infinity:
            continue
        try:
            p, gap = pseudo_intersect_least_squares(L1, L2)
        except NearParallel:
            continue
        assert np.allclose(p, [float(v) for v in exact.to_affine()], atol=1e-9)
        assert gap < 1e-9
        done += 1


def test_projection_idempotent_up_to_scale():
    rng = np.random.default_rng(3)
    checked = 0
    while checked < 50:
        coords = [Fraction(int(v)) for v in rng.integers(-6, 7, 4)]
        plane_v = [Fraction(int(v)) for v in rng.integers(-6, 7, 4)]
        if not any(coords) or not any(plane_v[:3]):
            continue
        e = ProjPoint(coords)
        try:
            P = build_projection_matrix(e, Plane(*plane_v))
        except EyeOnPlane:
            continue
        assert not any(P.apply(e.coords))
        assert P.rank() == 3
        for _ in range(5):
            x = [Fraction(int(v)) for v in rng.integers(-9, 10, 4)]
            y = P.apply(x)
            if not any(y):
                continue
            assert ProjPoint(P.apply(y)) == ProjPoint(y)
        checked += 1
