from fractions import Fraction

import numpy as np
import pytest

from curveproj.curves import (
    CurveParam,
    is_line,
    plane_of_curve,
    point_at_infinity,
    self_intersection_params,
    tracing_index,
)
from curveproj.errors import DegenerateCurve, ImproperParametrization, NotPlanar
from curveproj.geometry import Plane, ProjPoint
from curveproj.parser import parse_curve
from curveproj.ratfun import Poly, RatFun, isolate_real_roots
from conftest import fixture_pair


def curve(x, y, z, var="t"):
    return parse_curve({"variable": var, "x": x, "y": y, "z": z})


def test_plane_of_exfin_c2():
    _, c2 = fixture_pair("exfin")
    plane, line = plane_of_curve(c2)
    assert plane == Plane(1, 1, 1, 0)
    assert not line


def test_plane_of_circle_is_z_equals_one():
    _, c2 = fixture_pair("circles")
    plane, _ = plane_of_curve(c2)
    assert plane == Plane(0, 0, 1, -1)


def test_plane_identity_holds_exactly():
    for name in ("exfin", "cone", "example2"):
        _, c2 = fixture_pair(name)
        plane, _ = plane_of_curve(c2)
        X = c2.projective()
        total = sum((X[i] * plane.vector[i] for i in range(4)), Poly())
        assert total.is_zero()


def test_twisted_cubic_not_planar():
    with pytest.raises(NotPlanar):
        plane_of_curve(curve("t", "t^2", "t^3"))


def test_constant_curve_is_degenerate():
    with pytest.raises(DegenerateCurve):
        plane_of_curve(curve("1", "2", "3"))


def test_line_detection():
    assert is_line(curve("2*t+1", "t-1", "3*t"))
    assert not is_line(curve("t", "t^2", "0"))
    assert not is_line(curve("t", "t^2", "t^3"))


def test_point_at_infinity_parabola_space_curve():
    p = point_at_infinity(curve("t", "t^2", "1/t"))
    assert p == ProjPoint((0, 1, 0, 0))
    # numeric confirmation at a large parameter
    t = 1e6
    v = np.array([t, t * t, 1 / t])
    v = v / np.linalg.norm(v)
    assert np.allclose(v, [0, 1, 0], atol=1e-5)


def test_point_at_infinity_circle_is_affine():
    p = point_at_infinity(curve("(1-s^2)/(1+s^2)", "2*s/(1+s^2)", "1", "s"))
    assert p == ProjPoint.affine(-1, 0, 1)


def test_point_at_infinity_cone_conic():
    p = point_at_infinity(curve("10*s+5", "-2*(s+3)*(s-2)", "2*s^2+s+2", "s"))
    assert p == ProjPoint((0, -1, 1, 0))


def test_point_at_infinity_ignores_common_factor():
    c = curve("t", "t^2", "1/t")
    X = c.projective()
    f = Poly([3, -1, 2])
    p = ProjPoint([(X[3] * f).degree and (x * f).coeff(max(y.degree for y in X) + 2) for x in X])
    assert p == point_at_infinity(c)


def test_tracing_index_values():
    assert tracing_index(curve("t", "t^2", "t^3")) == 1
    assert tracing_index(curve("t^2", "t^4", "t^6")) == 2
    c1, _ = fixture_pair("exfin")
    assert tracing_index(c1) == 1


def test_tracing_index_mobius_invariant():
    c = curve("t^2+1", "t^3", "1/(t-2)")
    for m in (RatFun(Poly([1, 2]), Poly([3, 1])), RatFun(Poly([-1, 0, 0]) + Poly([0, 1]), Poly([1, 1]))):
        assert tracing_index(c.compose(m)) == tracing_index(c) == 1


def test_self_intersection_nodal_cubic():
    S = self_intersection_params(curve("t^2-1", "t^3-t", "0"))
    assert S(1) == 0 and S(-1) == 0


def test_self_intersection_circle_has_no_real_roots():
    _, c2 = fixture_pair("circles")
    S = self_intersection_params(c2)
    assert S.degree < 1 or not isolate_real_roots(S)


def test_self_intersection_exfin_c2_real_node():
    # the exfin C2 is a planar quartic with one real node; S vanishes at both
    # of its parameters and every real root of S pairs up with another
    _, c2 = fixture_pair("exfin")
    S = self_intersection_params(c2)
    roots = [float(iv.mid) for iv in isolate_real_roots(S)]
    pts = np.array([c2.eval_float(r)[0] for r in roots])
    for i, p in enumerate(pts):
        others = np.delete(pts, i, axis=0)
        assert np.min(np.linalg.norm(others - p, axis=1)) < 1e-9
    assert len(roots) == 2


def test_self_intersection_requires_proper():
    with pytest.raises(ImproperParametrization):
        self_intersection_params(curve("t^2", "t^4", "t^6"))


def test_curve_point_and_compose():
    c = curve("t", "t^2", "1/t")
    assert c.point(Fraction(2)) == ProjPoint.affine(2, 4, Fraction(1, 2))
    d = c.compose(RatFun(Poly([1, 1])))
    assert d.point(1) == c.point(2)
    assert c.point(0).at_infinity
