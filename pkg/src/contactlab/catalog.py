"""Named test curves used by the command line and the test-suite."""

from __future__ import annotations

import numpy as np

from .constructions import legendrian_lift
from .curves import AnalyticCurve, PiecewiseCurve, circle_curve, line_curve
from .errors import ContractViolation


def diagonal(slope: float = 1.0) -> AnalyticCurve:
    """``t -> (t, 0, slope t)`` on [0, 1]; transverse to xi with defect ``slope``."""
    return line_curve([0.0, 0.0, 0.0], [1.0, 0.0, slope])


def interval(height: float = 1.0, base=(0.0, 0.0)) -> AnalyticCurve:
    """The Reeb segment ``{(x0, y0, z): 0 <= z <= height}``."""
    return line_curve([base[0], base[1], 0.0], [0.0, 0.0, height])


def lissajous(a: int = 1, b: int = 2, scale: float = 1.0, phase: float = 0.0, samples: int = 2048) -> AnalyticCurve:
    """Planar ``(scale sin(a t), scale sin(b t + phase) / b)``, t in [0, 2 pi]."""

    def pos(t):
        return np.column_stack([scale * np.sin(a * t), scale * np.sin(b * t + phase) / b])

    def vel(t):
        return np.column_stack([scale * a * np.cos(a * t), scale * np.cos(b * t + phase)])

    return AnalyticCurve(pos, vel, (0.0, 2 * np.pi), closed=True, samples=samples)


def figure_eight(scale: float = 1.0):
    """Closed Legendrian whose projection is the figure eight ``(sin t, sin 2t / 2)``."""
    return legendrian_lift(lissajous(1, 2, scale))


def segment_then_circle(samples: int = 1024) -> PiecewiseCurve:
    """Planar path from (0, 0) to (1, 0) followed by one CCW turn of the unit circle about (0, 0)."""
    seg = line_curve([0.0, 0.0], [1.0, 0.0], (0.0, 1.0), samples=64)
    circ = circle_curve(1.0, samples=samples)
    shifted = AnalyticCurve(
        lambda t: circ(t - 1.0),
        lambda t: circ.derivative(t - 1.0),
        (1.0, 1.0 + 2 * np.pi),
        grid=1.0 + circ.grid,
    )
    return PiecewiseCurve([seg, shifted])


def random_loop(seed: int = 0, modes: int = 4, samples: int = 1024) -> AnalyticCurve:
    """Closed planar curve with seeded random Fourier coefficients decaying like ``1/k^2``."""
    rng = np.random.default_rng(seed)
    k = np.arange(1, modes + 1)
    coef = rng.normal(size=(4, modes)) / k**2
    coef[0, 0] += 1.0
    coef[3, 0] += 1.0

    def pos(t):
        c, s = np.cos(np.outer(t, k)), np.sin(np.outer(t, k))
        return np.column_stack([c @ coef[0] + s @ coef[1], c @ coef[2] + s @ coef[3]])

    def vel(t):
        c, s = np.cos(np.outer(t, k)), np.sin(np.outer(t, k))
        return np.column_stack([(-s * k) @ coef[0] + (c * k) @ coef[1], (-s * k) @ coef[2] + (c * k) @ coef[3]])

    return AnalyticCurve(pos, vel, (0.0, 2 * np.pi), closed=True, samples=samples)


def _space(planar: AnalyticCurve, z: float = 0.0) -> AnalyticCurve:
    return AnalyticCurve(
        lambda t: np.column_stack([planar(t), np.full(np.size(t), z)]),
        lambda t: np.column_stack([planar.derivative(t), np.zeros(np.size(t))]),
        planar.domain,
        closed=planar.closed,
        grid=planar.grid,
    )


CURVES = {
    "diagonal": lambda seed: diagonal(1.0),
    "steep-diagonal": lambda seed: diagonal(2.0),
    "interval": lambda seed: interval(1.0),
    "unit-circle": lambda seed: circle_curve(1.0),
    "unit-circle-3d": lambda seed: circle_curve(1.0, z=0.0),
    "circle-lift": lambda seed: legendrian_lift(circle_curve(1.0)).curve,
    "segment-circle": lambda seed: segment_then_circle(),
    "segment-circle-lift": lambda seed: legendrian_lift(segment_then_circle()).curve,
    "figure-eight": lambda seed: figure_eight().curve,
    "random-loop": lambda seed: random_loop(seed),
    "random-loop-3d": lambda seed: _space(random_loop(seed)),
}


def named_curve(name: str, seed: int = 0):
    try:
        return CURVES[name](seed)
    except KeyError:
        raise ContractViolation(f"unknown curve {name!r}; known: {', '.join(sorted(CURVES))}") from None
