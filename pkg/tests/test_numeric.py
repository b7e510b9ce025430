import functools
import math
from fractions import Fraction

import numpy as np
import pytest

from curveproj.curves import CurveParam, plane_of_curve
from curveproj.detect import compute_constraint_surface, detect_exact
from curveproj.errors import IncompatibleStrip, PlaneMismatch
from curveproj.numeric import (
    NumCurve,
    approx_eye_candidates,
    branch_roots,
    detect_approx,
    find_strip,
    hausdorff_estimate,
    param_chart,
)
from curveproj.parser import parse_curve
from curveproj.ratfun import Poly, RatFun
from conftest import fixture_pair
from synth import rand_curve, synthetic_instance

GOOD = np.array([0.998393660, 0.998630969, 0.9998988141])
DECOY = np.array([13.96606371, 26.47971848, -6.649856672])
R2 = math.sqrt(2)


@functools.lru_cache(maxsize=None)
def surface(name):
    return compute_constraint_surface(*fixture_pair(name))


def test_chart_covers_real_line_monotonically():
    u = np.linspace(-0.999, 0.999, 1001)
    t = param_chart(u)
    assert np.all(np.diff(t) > 0)
    assert t[0] < -400 and t[-1] > 400 and param_chart(np.array([0.0]))[0] == 0


def test_exfin_perturbed_root_lists():
    b1, b2 = branch_roots(surface("exfin_perturbed"), 1, Fraction(3, 2))
    assert np.allclose(b1.roots, [-16.82354557, -1.536480878, -0.4983244587, 1.000123802], atol=1e-6)
    assert np.allclose(b2.roots, [-5.921589025, -1.022763869, -0.5901004394, 1.499976466], atol=1e-6)
    assert b1.count == b2.count == 4


def test_circles_roots_at_zero_match_quadratic():
    # 4s^2 - 8s - 4 = 0  =>  s = 1 +- sqrt(2)
    b1, _ = branch_roots(surface("circles"), 0, Fraction(1, 8))
    assert np.allclose(b1.roots, [1 - R2, 1 + R2], atol=1e-10)


def test_strip_with_vertical_asymptote_is_incompatible():
    # exfin_perturbed: N has a vertical asymptote wherever lc_s(N) vanishes
    s = surface("exfin_perturbed")
    lc = s.ncal.lc_s()
    from curveproj.ratfun import isolate_real_roots

    roots = isolate_real_roots(lc)
    assert roots
    r = roots[0].mid
    with pytest.raises(IncompatibleStrip):
        branch_roots(s, r - Fraction(1, 4), r + Fraction(1, 4))


def test_exfin_perturbed_candidates():
    c1, c2 = fixture_pair("exfin_perturbed")
    pair = branch_roots(surface("exfin_perturbed"), 1, Fraction(3, 2))
    cands = approx_eye_candidates(c1, c2, pair)
    eyes = {c.branch: c.eye for c in cands}
    assert np.all(np.abs(eyes[3] - GOOD) < 1e-5)
    assert np.all(np.abs(eyes[2] - DECOY) < 1e-3)


def test_circles_candidates_on_z_axis():
    c1, c2 = fixture_pair("circles")
    (t1, t2), pair = find_strip(surface("circles"), c1, c2=c2)
    zs = sorted(c.eye[2] for c in approx_eye_candidates(c1, c2, pair))
    assert abs(zs[0] - (2 - R2)) < 1e-6 and abs(zs[1] - (2 + R2)) < 1e-6


def test_hausdorff_identical_is_zero():
    c1, c2 = fixture_pair("circles")
    assert hausdorff_estimate(c2, c2, 256) == 0.0


def test_hausdorff_symmetric_and_nonnegative():
    _, c2 = fixture_pair("circles")
    shifted = parse_curve({"variable": "s", "x": "(1-s^2)/(1+s^2)+1/4", "y": "2*s/(1+s^2)", "z": "1"})
    h1 = hausdorff_estimate(c2, shifted, 256)
    h2 = hausdorff_estimate(shifted, c2, 256)
    # the sup sits at s = 0 and s = inf, between samples: a sampled estimate
    assert h1 == h2 and abs(h1 - 0.25) < 1e-4


def test_hausdorff_circle_radii():
    # concentric circles of radius 1 and 2 in one plane: H = 1
    a = parse_curve({"variable": "s", "x": "(1-s^2)/(1+s^2)", "y": "2*s/(1+s^2)", "z": "0"})
    b = parse_curve({"variable": "s", "x": "2*(1-s^2)/(1+s^2)", "y": "4*s/(1+s^2)", "z": "0"})
    assert abs(hausdorff_estimate(a, b, 512) - 1.0) < 1e-9


def test_hausdorff_plane_mismatch():
    a = parse_curve({"variable": "s", "x": "s", "y": "s^2", "z": "0"})
    b = parse_curve({"variable": "s", "x": "s", "y": "s^2", "z": "1"})
    with pytest.raises(PlaneMismatch):
        hausdorff_estimate(a, b, 128)


def test_hausdorff_needs_samples():
    _, c2 = fixture_pair("circles")
    with pytest.raises(ValueError):
        hausdorff_estimate(c2, c2, 10)


def test_detect_approx_exfin_perturbed_decoy_rejected():
    c1, c2 = fixture_pair("exfin_perturbed")
    found = detect_approx(c1, c2, 1e-3, surface=surface("exfin_perturbed"))
    decoy = [f for f in found if f.eye is not None and np.all(np.abs(f.eye - DECOY) < 1e-3)]
    assert len(decoy) == 1 and not decoy[0].accepted and decoy[0].hausdorff >= 0.1
    for f in found:
        assert f.accepted == (f.hausdorff < f.epsilon)


def test_detect_approx_circles():
    c1, c2 = fixture_pair("circles")
    found = [f for f in detect_approx(c1, c2, 1e-6, surface=surface("circles")) if f.accepted]
    zs = sorted(f.eye[2] for f in found)
    assert len(zs) == 2
    assert abs(zs[0] - (2 - R2)) < 1e-6 and abs(zs[1] - (2 + R2)) < 1e-6
    for f in found:
        assert abs(f.eye[0]) < 1e-9 and abs(f.eye[1]) < 1e-9
        assert f.promoted is None  # irrational eyes never promote


def test_promotion_of_rational_eye():
    c1, c2 = fixture_pair("exfin")
    found = [f for f in detect_approx(c1, c2, surface=surface("exfin")) if f.accepted]
    assert len(found) == 1
    assert found[0].promoted is not None and found[0].promoted.certification == "exact"


def test_unrelated_pair_has_no_accepted_finding():
    import random

    rng = random.Random(5)
    c1 = rand_curve(rng, 3)
    _, c2, _, _ = synthetic_instance(77)
    found = detect_approx(c1, c2)
    assert not any(f.accepted for f in found)


def _eye_error(f, e):
    v = np.array(f.proj_point().coords, dtype=float)
    i = int(np.argmax(np.abs(e)))
    return float(np.max(np.abs(v / v[i] * e[i] - e)))


def test_approx_agrees_with_exact_on_synthetic_instances():
    for k in range(50):
        c1, c2, eye, _ = synthetic_instance(3000 + k)
        e = np.array([float(v) for v in eye.coords])
        exact = detect_exact(c1, c2)
        assert any(f.eye == eye for f in exact)
        accepted = [f for f in detect_approx(c1, c2, do_promote=False) if f.accepted]
        assert accepted, k
        assert min(_eye_error(f, e) for f in accepted) <= 1e-8, k


def _in_plane_perturbation(c2, delta, rng):
    """Relative noise on the coefficients of C2's homogeneous form.

    Two coordinates and the denominator are perturbed; the third coordinate
    is solved from the plane equation so the result stays exactly planar.
    """
    plane, _ = plane_of_curve(c2)
    A, B, C, D = plane.vector
    X = list(c2.projective())
    solve = 2 if C != 0 else (1 if B != 0 else 0)
    d = Fraction(delta)
    for i in (0, 1, 2, 3):
        if i != solve:
            X[i] = Poly([c * (1 + d * rng.choice((-1, 1))) for c in X[i].coeffs])
    acc = X[3] * -D
    for i, a in enumerate((A, B, C)):
        if i != solve:
            acc = acc - X[i] * a
    X[solve] = acc * (1 / Fraction((A, B, C)[solve]))
    return CurveParam(*[RatFun(X[i], X[3]) for i in range(3)], variable=c2.variable)


@pytest.mark.xfail(strict=True, reason="ill-conditioned random instances amplify coefficient noise beyond 100*delta")
@pytest.mark.parametrize("delta", [1e-6, 1e-3])
def test_noise_smoke_property(delta):
    import random

    rng = random.Random(int(1 / delta))
    bad = []
    for k in range(20):
        c1, c2, eye, _ = synthetic_instance(4000 + k, parallel_rate=0.0)
        e = np.array([float(v) for v in eye.coords])
        noisy = _in_plane_perturbation(c2, delta, rng)
        found = detect_approx(c1, noisy, epsilon=1.0, do_promote=False)
        errs = [_eye_error(f, e) / max(1.0, float(np.abs(e[:3] / e[3]).max())) for f in found]
        if not errs or min(errs) > 100 * delta:
            bad.append((k, min(errs, default=None)))
    print(f"noise {delta:g}: {20 - len(bad)}/20 within 100*delta; misses {bad}")
    assert not bad
