import numpy as np
import pytest

from contactlab.curves import AnalyticCurve, circle_curve, line_curve


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def diagonal():
    return line_curve([0.0, 0.0, 0.0], [1.0, 0.0, 1.0])


@pytest.fixture
def unit_circle():
    return circle_curve(1.0)


@pytest.fixture
def circle3d():
    return circle_curve(1.0, z=0.0)


def random_star_polygon(rng, m=None, r_max=0.95):
    """Simple polygon inside the unit disc: star-shaped about a random centre."""
    m = int(rng.integers(3, 40)) if m is None else m
    theta = np.sort(rng.uniform(0, 2 * np.pi, m))
    while np.min(np.diff(np.r_[theta, theta[0] + 2 * np.pi])) < 1e-3:
        theta = np.sort(rng.uniform(0, 2 * np.pi, m))
    c = rng.uniform(-0.3, 0.3, 2)
    room = r_max - np.linalg.norm(c)
    r = rng.uniform(0.05, room, m)
    pts = c + r[:, None] * np.column_stack([np.cos(theta), np.sin(theta)])
    return pts if rng.random() < 0.5 else pts[::-1]


def lissajous_space(a, b, scale=1.0, z=0.0):
    """Non-Legendrian closed Lissajous curve at constant height."""
    def pos(t):
        return np.column_stack([scale * np.sin(a * t), scale * np.sin(b * t) / b, np.full(t.shape, z)])

    def vel(t):
        return np.column_stack([scale * a * np.cos(a * t), scale * np.cos(b * t), np.zeros(t.shape)])

    return AnalyticCurve(pos, vel, (0.0, 2 * np.pi), closed=True)


ACCEPTANCE_LINES: list[str] = []


def verdict(number: int, label: str, **checks) -> bool:
    """Record one PASS/FAIL line for an exit criterion and return the outcome."""
    ok = all(bool(v) for v in checks.values())
    failed = [k for k, v in checks.items() if not v]
    detail = "" if ok else f" (failed: {', '.join(failed)})"
    line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}: {label}{detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
