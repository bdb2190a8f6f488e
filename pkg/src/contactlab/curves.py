"""Parameterized curves and the planar integrals built on them.

A curve is a map ``[t0, t1] -> R^d`` that can be evaluated and differentiated
at arrays of parameters.  Odd ``d = 2n+1`` means a curve in the contact
space, even ``d = 2n`` a curve in the Lagrangian-projection plane.  Three
concrete kinds exist:

* :class:`AnalyticCurve` -- closed-form position and velocity callables;
* :class:`SampledCurve` -- a strictly increasing parameter grid with
  positions, evaluated by linear interpolation, differentiated by centred
  differences (one-sided at the ends);
* :class:`PiecewiseCurve` -- consecutive curves glued end to end.

Every curve carries a ``grid``: the parameters at which it is sampled when a
polyline is needed (chords, neighbourhoods, plots).  Quadrature refines this
grid four times and applies composite Simpson per grid interval, so kinks
must sit on grid nodes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.interpolate import CubicSpline

from .core import ContactModel
from .errors import ContractViolation, DegenerateInputError

MIN_SAMPLES = 16
IMMERSION_TOL = 1e-8
QUAD_REFINE = 4


class Curve:
    """Common interface; subclasses implement ``__call__`` and ``derivative``."""

    domain: tuple[float, float]
    closed: bool
    dim: int
    grid: np.ndarray

    def __call__(self, t) -> np.ndarray:  # pragma: no cover - interface
        raise NotImplementedError

    def derivative(self, t) -> np.ndarray:  # pragma: no cover - interface
        raise NotImplementedError

    @property
    def n(self) -> int:
        return self.dim // 2

    @property
    def is_space(self) -> bool:
        return self.dim % 2 == 1

    @property
    def model(self) -> ContactModel:
        return ContactModel(self.n)

    @property
    def length(self) -> float:
        return self.domain[1] - self.domain[0]

    def polyline(self) -> tuple[np.ndarray, np.ndarray]:
        """Return ``(t, points)`` on the curve's sampling grid."""
        return self.grid, self(self.grid)

    def refined_grid(self, factor: int = QUAD_REFINE) -> np.ndarray:
        g = self.grid
        frac = np.arange(factor) / factor
        fine = (g[:-1, None] + np.diff(g)[:, None] * frac[None, :]).ravel()
        return np.append(fine, g[-1])

    def speeds(self, t=None) -> np.ndarray:
        t = self.grid if t is None else t
        return np.linalg.norm(self.derivative(t), axis=-1)

    def check_immersed(self, what: str = "curve"):
        s = self.speeds()
        if np.any(~np.isfinite(s)) or np.min(s) < IMMERSION_TOL:
            k = int(np.argmin(s))
            raise DegenerateInputError(
                f"{what} is not immersed: speed {s[k]:.3g} at t={self.grid[k]:.6g}"
            )

    def reparameterized(self, domain) -> "Curve":
        """The same curve precomposed with the affine map onto ``domain``."""
        a0, a1 = map(float, domain)
        b0, b1 = self.domain
        if a1 <= a0:
            raise ContractViolation("empty parameter domain")
        if (a0, a1) == (b0, b1):
            return self
        scale = (b1 - b0) / (a1 - a0)
        to_self = lambda t: b0 + (np.asarray(t, float) - a0) * scale  # noqa: E731
        return AnalyticCurve(
            lambda t: self(to_self(t)),
            lambda t: self.derivative(to_self(t)) * scale,
            (a0, a1),
            closed=self.closed,
            grid=a0 + (self.grid - b0) / scale,
        )


def _as_grid(grid, domain, default_intervals, breakpoints=()):
    t0, t1 = domain
    if grid is None:
        grid = np.linspace(t0, t1, default_intervals + 1)
    grid = np.union1d(np.asarray(grid, float), np.asarray(list(breakpoints) + [t0, t1], float))
    return grid[(grid >= t0) & (grid <= t1)]


class AnalyticCurve(Curve):
    """Curve given by vectorised ``position(t)`` and ``velocity(t)``.

    Both callables take a 1-d parameter array and return ``(len(t), dim)``.
    """

    def __init__(
        self,
        position: Callable,
        velocity: Callable,
        domain,
        *,
        closed: bool = False,
        grid=None,
        breakpoints=(),
        samples: int = 1024,
    ):
        t0, t1 = map(float, domain)
        if not t1 > t0:
            raise ContractViolation(f"invalid domain {domain!r}")
        self.domain = (t0, t1)
        self.closed = bool(closed)
        self._position = position
        self._velocity = velocity
        self.grid = _as_grid(grid, self.domain, samples, breakpoints)
        self.grid.setflags(write=False)
        probe = np.atleast_2d(position(self.grid[:1]))
        self.dim = probe.shape[-1]

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.asarray(self._position(np.atleast_1d(t)), dtype=float)
        return out[0] if t.ndim == 0 else out

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        out = np.asarray(self._velocity(np.atleast_1d(t)), dtype=float)
        return out[0] if t.ndim == 0 else out


class SampledCurve(Curve):
    """Curve known only at a strictly increasing parameter grid."""

    def __init__(self, t, points, *, closed: bool = False):
        t = np.array(t, dtype=float)
        points = np.array(points, dtype=float)
        if points.ndim != 2 or points.shape[0] != t.shape[0]:
            raise ContractViolation("points must have shape (len(t), dim)")
        if t.size < MIN_SAMPLES:
            raise ContractViolation(f"sampled curves need >= {MIN_SAMPLES} nodes, got {t.size}")
        if np.any(np.diff(t) <= 0):
            raise ContractViolation("parameters must be strictly increasing")
        if not (np.all(np.isfinite(t)) and np.all(np.isfinite(points))):
            raise ContractViolation("samples must be finite")
        t.setflags(write=False)
        points.setflags(write=False)
        self.t, self.points = t, points
        self.grid = t
        self.domain = (float(t[0]), float(t[-1]))
        self.closed = bool(closed)
        self.dim = points.shape[1]
        # centred differences inside, one-sided at the ends
        self.node_derivatives = np.gradient(points, t, axis=0, edge_order=1)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        tt = np.atleast_1d(t)
        out = np.column_stack([np.interp(tt, self.t, self.points[:, j]) for j in range(self.dim)])
        return out[0] if t.ndim == 0 else out

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        tt = np.atleast_1d(t)
        d = self.node_derivatives
        out = np.column_stack([np.interp(tt, self.t, d[:, j]) for j in range(self.dim)])
        return out[0] if t.ndim == 0 else out

    def to_analytic(self, refine: int = 4) -> AnalyticCurve:
        """Cubic-spline interpolant through the samples (keeps the nodes)."""
        bc = "periodic" if self.closed and np.allclose(self.points[0], self.points[-1]) else "not-a-knot"
        spline = CubicSpline(self.t, self.points, axis=0, bc_type=bc)
        grid = np.linspace(0, 1, refine + 1)[:-1]
        fine = np.append((self.t[:-1, None] + np.diff(self.t)[:, None] * grid).ravel(), self.t[-1])
        return AnalyticCurve(spline, spline.derivative(), self.domain, closed=self.closed, grid=fine)


class PiecewiseCurve(Curve):
    """Curves glued end to end; piece ``k`` owns ``[d_k, d_{k+1}]``."""

    def __init__(self, pieces, *, closed: bool = False):
        pieces = list(pieces)
        if not pieces:
            raise ContractViolation("need at least one piece")
        for a, b in zip(pieces, pieces[1:]):
            if not np.isclose(a.domain[1], b.domain[0], rtol=0, atol=1e-12 * max(1, abs(a.domain[1]))):
                raise ContractViolation("piece domains must be contiguous")
        dims = {p.dim for p in pieces}
        if len(dims) != 1:
            raise ContractViolation("pieces must share a dimension")
        self.pieces = pieces
        self.dim = dims.pop()
        self.closed = bool(closed)
        self.domain = (pieces[0].domain[0], pieces[-1].domain[1])
        self.breaks = np.array([p.domain[0] for p in pieces] + [self.domain[1]])
        self.grid = np.unique(np.concatenate([p.grid for p in pieces]))

    def _dispatch(self, t, method):
        t = np.asarray(t, dtype=float)
        tt = np.atleast_1d(t)
        idx = np.clip(np.searchsorted(self.breaks, tt, side="right") - 1, 0, len(self.pieces) - 1)
        out = np.empty((tt.size, self.dim))
        order = np.argsort(idx, kind="stable")
        sorted_idx = idx[order]
        bounds = np.flatnonzero(np.r_[True, sorted_idx[1:] != sorted_idx[:-1], True])
        for lo, hi in zip(bounds[:-1], bounds[1:]):
            sel = order[lo:hi]
            out[sel] = np.atleast_2d(method(self.pieces[sorted_idx[lo]], tt[sel]))
        return out[0] if t.ndim == 0 else out

    def __call__(self, t):
        return self._dispatch(t, lambda c, s: c(s))

    def derivative(self, t):
        return self._dispatch(t, lambda c, s: c.derivative(s))


def unwrap(curve) -> Curve:
    """Accept wrappers (e.g. certified Legendrian curves) that hold a ``.curve``."""
    while not isinstance(curve, Curve) and hasattr(curve, "curve"):
        curve = curve.curve
    if not isinstance(curve, Curve):
        raise ContractViolation(f"expected a curve, got {type(curve).__name__}")
    return curve


# -- simple constructors ------------------------------------------------------


def line_curve(start, direction, domain=(0.0, 1.0), samples: int = 256) -> AnalyticCurve:
    """``t -> start + t * direction``."""
    start = np.asarray(start, float)
    direction = np.asarray(direction, float)
    return AnalyticCurve(
        lambda t: start + t[:, None] * direction,
        lambda t: np.broadcast_to(direction, (t.size, direction.size)).copy(),
        domain,
        samples=samples,
    )


def circle_curve(radius=1.0, center=(0.0, 0.0), z=None, *, turns: int = 1, clockwise=False, samples=1024):
    """Circle starting at angle 0; planar if ``z`` is None, else at height ``z``."""
    cx, cy = map(float, center)
    sgn = -1.0 if clockwise else 1.0

    def pos(t):
        xy = [cx + radius * np.cos(t), cy + sgn * radius * np.sin(t)]
        if z is not None:
            xy.append(np.full_like(t, float(z)))
        return np.column_stack(xy)

    def vel(t):
        v = [-radius * np.sin(t), sgn * radius * np.cos(t)]
        if z is not None:
            v.append(np.zeros_like(t))
        return np.column_stack(v)

    return AnalyticCurve(pos, vel, (0.0, 2 * np.pi * turns), closed=True, samples=samples * turns)


# -- operations ---------------------------------------------------------------


def _simpson_weights(m: int) -> np.ndarray:
    # m intervals, m even
    w = np.ones(m + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return w / 3.0


def integrate_along(curve: Curve, integrand) -> float:
    """``int integrand(position, velocity) dt`` by composite Simpson on the x4 refined grid."""
    t = curve.refined_grid(QUAD_REFINE)
    P, V = curve(t), curve.derivative(t)
    f = integrand(P, V)
    h = np.diff(t)
    # Simpson on each pair of sub-intervals (uniform inside one grid interval)
    f0, f1, f2 = f[0:-1:2], f[1::2], f[2::2]
    return float(np.sum((h[0::2] + h[1::2]) / 6.0 * (f0 + 4.0 * f1 + f2)))


@dataclass(frozen=True)
class DefectReport:
    """How far a space curve is from being Legendrian."""

    sup_defect: float
    total_defect: float
    argmax: float


def legendrian_defect(c) -> DefectReport:
    """Sup of ``|alpha(c')| / |c'|`` over samples and ``int alpha(c') dt``."""
    c = unwrap(c)
    if not c.is_space:
        raise ContractViolation("legendrian_defect needs a curve in R^{2n+1}")
    c.check_immersed()
    model = c.model
    n = c.n
    if isinstance(c, SampledCurve):
        t, P, V = c.t, c.points, c.node_derivatives
        dP = np.diff(P, axis=0)
        ybar = 0.5 * (P[1:, n : 2 * n] + P[:-1, n : 2 * n])
        total = float(np.sum(dP[:, -1] - np.sum(ybar * dP[:, :n], axis=1)))
    else:
        t = c.refined_grid(QUAD_REFINE)
        P, V = c(t), c.derivative(t)
        total = integrate_along(c, model.alpha)
    ratio = np.abs(model.alpha(P, V)) / np.linalg.norm(V, axis=1)
    k = int(np.argmax(ratio))
    return DefectReport(sup_defect=float(ratio[k]), total_defect=total, argmax=float(t[k]))


def lagrangian_projection(c) -> Curve:
    """Forget the z coordinate, keeping parameterisation and sampling."""
    c = unwrap(c)
    if not c.is_space:
        raise ContractViolation("can only project curves in R^{2n+1}")
    proj = getattr(c, "projection", None)
    if proj is not None:
        return proj
    d = c.dim - 1
    if isinstance(c, SampledCurve):
        return SampledCurve(c.t, c.points[:, :d], closed=c.closed)
    return AnalyticCurve(
        lambda t: c(t)[..., :d], lambda t: c.derivative(t)[..., :d], c.domain, closed=c.closed, grid=c.grid
    )


def c0_distance(a, b) -> float:
    """Parameterised sup distance ``max_t |a(t) - b(t)|``.

    ``b`` is affinely reparameterised onto the domain of ``a`` first.
    """
    a, b = unwrap(a), unwrap(b)
    if a.dim != b.dim:
        raise ContractViolation(f"dimension mismatch {a.dim} != {b.dim}")
    b = b.reparameterized(a.domain)
    if not np.allclose(a.domain, b.domain):
        raise ContractViolation("domains differ after reparameterisation")
    grid = np.union1d(a.grid, b.grid)
    frac = np.arange(QUAD_REFINE) / QUAD_REFINE
    t = np.append((grid[:-1, None] + np.diff(grid)[:, None] * frac).ravel(), grid[-1])
    return float(np.max(np.linalg.norm(a(t) - b(t), axis=1)))


def _planar_points(p, closed):
    if isinstance(p, Curve) or hasattr(p, "curve"):
        p = unwrap(p)
        if p.dim != 2:
            raise ContractViolation("planar operations need a curve in R^2")
        return p, p.polyline()[1], p.closed
    pts = np.asarray(p, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ContractViolation("expected an (N, 2) point array")
    return None, pts, bool(closed)


def _close(pts):
    if not np.array_equal(pts[0], pts[-1]):
        pts = np.vstack([pts, pts[:1]])
    return pts


def path_action(p, closed: bool = False) -> float:
    """``int_p y dx``.

    Polylines (sampled curves, raw ``(N, 2)`` arrays) are integrated exactly
    segment by segment; analytic curves by Simpson quadrature.
    """
    curve, pts, closed = _planar_points(p, closed)
    if curve is not None and not isinstance(curve, SampledCurve):
        return integrate_along(curve, lambda P, V: P[:, 1] * V[:, 0])
    if closed:
        pts = _close(pts)
    return float(np.sum(0.5 * (pts[1:, 1] + pts[:-1, 1]) * np.diff(pts[:, 0])))


def signed_area(p, closed: bool = True) -> float:
    """Green/shoelace area, positive for counter-clockwise curves."""
    curve, pts, closed = _planar_points(p, closed)
    if not closed:
        raise ContractViolation("signed_area needs a closed curve")
    if curve is not None and not isinstance(curve, SampledCurve):
        return integrate_along(curve, lambda P, V: 0.5 * (P[:, 0] * V[:, 1] - P[:, 1] * V[:, 0]))
    pts = _close(pts)
    x, y = pts[:, 0], pts[:, 1]
    return float(0.5 * np.sum(x[:-1] * y[1:] - x[1:] * y[:-1]))


def point_polyline_distance(points, q) -> float:
    """Exact Euclidean distance from ``q`` to the polyline through ``points``."""
    P = np.asarray(points, float)
    q = np.asarray(q, float)
    if P.shape[0] == 1:
        return float(np.linalg.norm(P[0] - q))
    A, B = P[:-1], P[1:]
    d = B - A
    dd = np.einsum("ij,ij->i", d, d)
    with np.errstate(invalid="ignore", divide="ignore"):
        s = np.where(dd > 0, np.einsum("ij,ij->i", q - A, d) / dd, 0.0)
    s = np.clip(s, 0.0, 1.0)
    return float(np.min(np.linalg.norm(A + s[:, None] * d - q, axis=1)))


def winding_number(p, q, closed: bool = True) -> int:
    """Number of turns of the closed curve ``p`` around the point ``q``."""
    _, pts, closed = _planar_points(p, closed)
    if not closed:
        raise ContractViolation("winding_number needs a closed curve")
    pts = _close(pts)
    q = np.asarray(q, float)
    if point_polyline_distance(pts, q) <= 1e-9:
        raise DegenerateInputError("point lies on the curve")
    rel = pts - q
    ang = np.arctan2(rel[:, 1], rel[:, 0])
    turn = np.sum(np.angle(np.exp(1j * np.diff(ang)))) / (2 * np.pi)
    w = int(np.rint(turn))
    if abs(turn - w) > 0.1:
        raise DegenerateInputError(f"winding sum {turn:.3f} is not close to an integer")
    return w
