import numpy as np
import pytest

from minkruled.specs import FIXTURES, load_fixture

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def surfaces():
    return {name: load_fixture(name) for name in FIXTURES}


@pytest.fixture
def rng():
    return np.random.default_rng(20141016)


def fd5(f, u, h=1e-3):
    """Five-point central difference of a (vector-valued) function."""
    return (-f(u + 2 * h) + 8 * f(u + h) - 8 * f(u - h) + f(u - 2 * h)) / (12 * h)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def frame_errors(b, u, h=1e-5):
    """Worst violations of the frame invariants of director ``b`` at ``u``."""
    from minkruled import lorentz as lz
    from minkruled.framing import frame

    fr = frame(b, u)
    vecs = (fr.x, fr.a, fr.y)
    ortho = max(abs(float(lz.inner(p, q))) for i, p in enumerate(vecs) for q in vecs[i + 1:])
    unit = max(abs(abs(float(lz.inner(p, p))) - 1.0) for p in vecs)
    timelike = sum(e < 0 for e in (fr.eps_x, fr.eps_a, fr.eps_y))
    lo, hi = frame(b, u - h), frame(b, u + h)
    numeric = [(getattr(hi, k) - getattr(lo, k)) / (2 * h) for k in "xay"]
    frenet = max(float(np.max(np.abs(n - d))) for n, d in zip(numeric, fr.derivatives()))
    return {
        "orthogonality": ortho,
        "unit": unit,
        "timelike_count": timelike,
        "frenet": frenet,
        "cx_aprime": abs(fr.cx_aprime + fr.eps_a * fr.eps_x),
        "y_cross": float(np.max(np.abs(fr.y - lz.cross(fr.a, fr.x)))),
    }
