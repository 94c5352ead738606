import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from wronskia.geometry import SampledCurve
from wronskia.numkit import ClosedForm, Grid

settings.register_profile("default", deadline=None, max_examples=30, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def closed(*derivs, domain=(-np.inf, np.inf), name=""):
    """ClosedForm from four callables (value and three derivatives)."""
    return ClosedForm(list(derivs), domain=domain, name=name)


def curve_from(coords, grid, provenance="test"):
    """SampledCurve from three (f, f', f'', f''') tuples of callables."""
    t = grid.points
    d = np.array([[np.broadcast_to(f(t), t.shape) for f in c] for c in coords], dtype=float)
    return SampledCurve(grid, d[:, 0], np.transpose(d[:, 1:], (1, 0, 2)), provenance)


ZERO = lambda t: 0.0 * t  # noqa: E731
ONE = lambda t: 1.0 + 0.0 * t  # noqa: E731


def helix(grid, pitch=1.0):
    return curve_from(
        [
            (np.cos, lambda t: -np.sin(t), lambda t: -np.cos(t), np.sin),
            (np.sin, np.cos, lambda t: -np.sin(t), lambda t: -np.cos(t)),
            (lambda t: pitch * t, lambda t: pitch + 0 * t, ZERO, ZERO),
        ],
        grid,
        "helix",
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20261019)


@pytest.fixture
def unit_grid():
    return Grid(0.5, 3.0, 401)


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
