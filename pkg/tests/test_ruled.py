import math

import numpy as np
import pytest

from minkruled import lorentz as lz
from minkruled.curve import ExprCurve
from minkruled.errors import DegenerateMetric, DevelopableSurface, NotArcLength, NullNormal, NullRulingDerivative
from minkruled.expr import derivative
from minkruled.lorentz import CausalClass
from minkruled.ruled import (
    RuledSurface,
    SurfaceCase,
    case_from_signs,
    classify,
    evaluate,
    partials,
    richardson_derivatives,
    striction,
    structure_sample,
)


def curve(*comps, **params):
    return ExprCurve.from_strings(list(comps), params)


CIRCLE = curve("cos(u)", "sin(u)", "0")
HYPERBOLA = curve("sinh(u)", "0", "cosh(u)")


def test_striction_examples():
    p, off = striction(curve("0", "0", "u"), CIRCLE, 0.4)
    assert off == 0.0 and np.allclose(p, [0, 0, 0.4])
    p, off = striction(curve("0", "u", "0"), HYPERBOLA, -0.3)
    assert off == 0.0 and np.allclose(p, [0, -0.3, 0])
    # <alpha', b'> = 2, <b', b'> = 1, so sigma = alpha - 2 b = (0, 0, u)
    p, off = striction(curve("2*cos(u)", "2*sin(u)", "u"), CIRCLE, 1.1)
    assert off == pytest.approx(2.0, abs=1e-15)
    assert np.allclose(p, [0, 0, 1.1], atol=1e-15)


def test_striction_rejects_null_ruling_derivative():
    with pytest.raises(NullRulingDerivative):
        striction(curve("u", "0", "0"), curve("1", "u", "u"), 0.2)


def test_symbolic_striction_curve_matches_pointwise():
    s = RuledSurface(curve("2*cos(u)", "2*sin(u) + u^2", "u"), CIRCLE, (0, 1), (-1, 1))
    for u in np.linspace(0, 1, 9):
        p, _ = striction(s.alpha, s.b, u)
        assert np.allclose(s.sigma.at(u), p, atol=1e-14)


def test_striction_tangent_orthogonal_to_ruling_derivative(surfaces):
    rng = np.random.default_rng(11)
    for name, s in surfaces.items():
        for u in rng.uniform(*s.domain_u, 200):
            sig, b = s.curves_at(u)
            assert abs(float(lz.inner(sig.d1, b.d1))) < 1e-12, name


def test_evaluate_and_partials():
    s = RuledSurface(curve("0", "0", "u"), CIRCLE, (0, 6), (-0.9, 0.9))
    assert np.allclose(evaluate(s, 0.0, 0.5), [0.5, 0, 0])
    p = partials(s, 0.0, 0.5)
    assert np.allclose(p.Xu, [0, 0.5, 1])
    assert np.allclose(p.Xv, [1, 0, 0])
    assert np.allclose(p.Xuu, [-0.5, 0, 0])
    assert np.allclose(p.Xuv, [0, 1, 0])
    assert not np.any(p.Xvv)


@pytest.mark.parametrize(
    "name, cx, cy, kg, theta",
    [
        ("helicoid", lambda u: 0.0, 1.0, 0.0, 0.0),
        ("bscroll", lambda u: 0.0, -1.0, 0.0, 0.0),
        ("oblique_helicoid", lambda u: 2 * 0.5 * math.sin(u), 1.0, 0.0, 0.0),
        ("desitter_circle", lambda u: -0.75, 1.25, 0.6, -0.6),
        ("hyperbolic_sweep", lambda u: 0.0, 1.0, 0.0, 0.0),
    ],
)
def test_structure_sample_examples(surfaces, name, cx, cy, kg, theta):
    s = structure_sample(surfaces[name], 0.3)
    assert s.cx == pytest.approx(cx(0.3), abs=1e-12)
    assert s.cy == pytest.approx(cy, abs=1e-12)
    assert s.k_g == pytest.approx(kg, abs=1e-12)
    assert s.theta == pytest.approx(theta, abs=1e-12)
    assert s.mu == s.cy
    assert not s.developable


def test_pitch_is_minus_eps_x_cx(surfaces):
    for name, surf in surfaces.items():
        for u in np.linspace(*surf.domain_u, 40):
            s = structure_sample(surf, u)
            assert s.delta == pytest.approx(-s.frame.eps_x * s.cx, abs=1e-9), name


def test_fixtures_are_far_from_developable(surfaces):
    for name, surf in surfaces.items():
        for u in np.linspace(*surf.domain_u, 40):
            assert abs(structure_sample(surf, u).cy) >= 0.5, name


def test_cylinder_rejected():
    s = RuledSurface(curve("cos(u)", "sin(u)", "0"), curve("0", "0", "1"), (0, 1), (-1, 1))
    with pytest.raises(NotArcLength):
        s.check()


def test_cone_rejected_as_developable():
    s = RuledSurface(curve("0", "0", "0"), CIRCLE, (0, 1), (-1, 1))
    with pytest.raises(DevelopableSurface):
        s.check()


def test_fixtures_pass_check(surfaces):
    for s in surfaces.values():
        s.check()


def test_richardson_on_known_function():
    d1, d2 = richardson_derivatives(np.sin, 0.5, 1e-3)
    assert d1 == pytest.approx(math.cos(0.5), abs=1e-11)
    assert d2 == pytest.approx(-math.sin(0.5), abs=1e-7)


def _symbolic_coefficients(surface):
    """cx, cy, k_g as expression trees, built without the numeric frame."""
    x = surface.b.components
    a = surface.b.derivative(1)
    b2 = surface.b.derivative(2)
    sp = surface.sigma.derivative(1)

    def inner(p, q):
        return p[0] * q[0] + p[1] * q[1] - p[2] * q[2]

    y = (a[1] * x[2] - a[2] * x[1], a[2] * x[0] - a[0] * x[2], a[1] * x[0] - a[0] * x[1])
    return inner(sp, x) / inner(x, x), inner(sp, y) / inner(y, y), inner(b2, y) / inner(y, y)


def test_structure_derivatives_match_symbolic_path(surfaces):
    rng = np.random.default_rng(5)
    for name, surf in surfaces.items():
        cx, cy, kg = _symbolic_coefficients(surf)
        env = surf.b.params | surf.alpha.params
        exprs = {
            "d_cx": derivative(cx, 1), "d2_cx": derivative(cx, 2),
            "d_cy": derivative(cy, 1), "d2_cy": derivative(cy, 2),
            "d_kg": derivative(kg, 1),
        }
        for u in rng.uniform(*surf.domain_u, 10):
            s = structure_sample(surf, u)
            for key, e in exprs.items():
                exact = e.evaluate(u, env)
                assert getattr(s, key) == pytest.approx(exact, abs=1e-6 * max(1, abs(exact))), (name, key)


def test_classify_examples(surfaces):
    hel, bs = surfaces["helicoid"], surfaces["bscroll"]
    assert classify(hel, 0.3, 0.5) is SurfaceCase.TL_SpacelikeRuling_ASpacelike
    assert classify(hel, 0.3, 2.0) is SurfaceCase.SL_YTimelike
    for u in np.linspace(-1, 1, 7):
        for v in np.linspace(-2, 2, 7):
            assert classify(bs, u, v) is SurfaceCase.TL_TimelikeRuling
    with pytest.raises(DegenerateMetric):
        classify(hel, 0.3, 1.0)
    with pytest.raises(DegenerateMetric):
        classify(hel, 0.3, -1.0)


def test_hyperbolic_sweep_covers_timelike_a_and_spacelike_y(surfaces):
    sw = surfaces["hyperbolic_sweep"]
    # E = 1 - v^2, F = 0, G = 1: spacelike for |v| < 1, timelike beyond
    assert classify(sw, 0.2, 0.5) is SurfaceCase.SL_YSpacelike
    assert classify(sw, 0.2, 2.0) is SurfaceCase.TL_SpacelikeRuling_ATimelike


def test_case_from_signs_table():
    S, T = CausalClass.SPACELIKE, CausalClass.TIMELIKE
    assert case_from_signs(-1, 1, 1, S) is SurfaceCase.TL_TimelikeRuling
    assert case_from_signs(1, -1, 1, S) is SurfaceCase.TL_SpacelikeRuling_ATimelike
    assert case_from_signs(1, 1, -1, S) is SurfaceCase.TL_SpacelikeRuling_ASpacelike
    assert case_from_signs(1, 1, -1, T) is SurfaceCase.SL_YTimelike
    assert case_from_signs(1, -1, 1, T) is SurfaceCase.SL_YSpacelike
    with pytest.raises(NullNormal):
        case_from_signs(1, 1, -1, CausalClass.NULL)
