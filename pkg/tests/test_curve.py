import numpy as np
import pytest

from conftest import fd5
from minkruled.curve import ExprCurve, eval_curve
from minkruled.errors import EvalError, UnboundParameter


def test_circle_at_zero():
    c = ExprCurve.from_strings(["cos(u)", "sin(u)", "0"])
    ev = eval_curve(c, 0.0)
    assert np.array_equal(ev.p, [1, 0, 0])
    assert np.array_equal(ev.d1, [0, 1, 0])
    assert np.array_equal(ev.d2, [-1, 0, 0])
    assert np.array_equal(ev.d3, [0, -1, 0])


def test_hyperbola_at_zero():
    ev = eval_curve(ExprCurve.from_strings(["sinh(u)", "0", "cosh(u)"]), 0.0)
    assert np.array_equal(ev.p, [0, 0, 1])
    assert np.array_equal(ev.d1, [1, 0, 0])
    assert np.array_equal(ev.d2, [0, 0, 1])


def test_line_with_parameter():
    ev = eval_curve(ExprCurve.from_strings(["0", "0", "h*u"], {"h": 1}), 2.0)
    assert np.array_equal(ev.p, [0, 0, 2])
    assert np.array_equal(ev.d1, [0, 0, 1])
    assert np.array_equal(ev.d2, [0, 0, 0])


def test_unbound_parameter_rejected():
    with pytest.raises(UnboundParameter):
        ExprCurve.from_strings(["0", "0", "h*u"])


def test_eval_error_propagates():
    c = ExprCurve.from_strings(["ln(u)", "0", "0"])
    with pytest.raises(EvalError):
        c.eval(-1.0)


def test_matches_central_differences():
    c = ExprCurve.from_strings(["r*cos(u/r)", "u^3/6 - exp(-u)", "z0*u"], {"r": 1.25, "z0": 0.75})
    h = 1e-5
    for u in np.linspace(-2, 2, 17):
        ev = c.eval(u)
        for k in range(1, 4):
            numeric = (c.at(u + h, k - 1) - c.at(u - h, k - 1)) / (2 * h)
            assert np.allclose(ev[k], numeric, rtol=1e-6, atol=1e-6)


def test_transformed_applies_matrix():
    c = ExprCurve.from_strings(["cos(u)", "sin(u)", "u"])
    m = np.array([[1.0, 2.0, 0.0], [0.0, 1.0, -1.0], [3.0, 0.0, 1.0]])
    t = c.transformed(m)
    for u in (0.0, 0.7, -1.3):
        for k in range(4):
            assert np.allclose(t.at(u, k), m @ c.at(u, k), atol=1e-14)


def test_fixture_curve_derivatives(surfaces):
    for s in surfaces.values():
        for curve in (s.alpha, s.b, s.sigma):
            for u in np.linspace(*s.domain_u, 7):
                for k in range(1, 4):
                    numeric = fd5(lambda t: curve.at(t, k - 1), u)
                    assert np.allclose(curve.at(u, k), numeric, rtol=1e-7, atol=1e-7)
