"""Legendrian curves built from planar data.

* :func:`legendrian_lift` -- ``z(t) = z0 + int_{p|[t0,t]} y dx``.
* :func:`spiral_approximation` -- a Legendrian whose projection is an
  embedded Archimedean spiral; it tracks a vertical Reeb segment without
  creating any Reeb chord.
* :func:`wiggle_approximation` -- lift of the projection of an arbitrary
  curve with small curls inserted so that the lift keeps up with the
  curve's z-coordinate.  Each curl is a planar loop, so chords appear.
* :func:`suspension_pullback_norm` -- size of the pullback of
  ``d(e^s alpha)`` under the cylinder ``(x, t) -> (phi_{g1(t)} f(x), g2(t))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .curves import (
    AnalyticCurve,
    Curve,
    PiecewiseCurve,
    SampledCurve,
    lagrangian_projection,
    legendrian_defect,
    unwrap,
)
from .errors import ContractViolation, DegenerateInputError

TOL_LEG_ANALYTIC = 1e-9
TOL_LEG_SAMPLED = 1e-6

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(8)


@dataclass
class LegendrianCurve:
    """A space curve certified to satisfy ``sup |alpha(c')|/|c'| <= tol``."""

    curve: Curve
    sup_defect: float
    tol: float
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.sup_defect <= self.tol:
            raise DegenerateInputError(
                f"Legendrian certificate failed: defect {self.sup_defect:.3g} > {self.tol:.1g}"
            )

    def __call__(self, t):
        return self.curve(t)

    def derivative(self, t):
        return self.curve.derivative(t)

    @property
    def domain(self):
        return self.curve.domain


def certify(curve: Curve, provenance=None) -> LegendrianCurve:
    tol = TOL_LEG_SAMPLED if isinstance(curve, SampledCurve) else TOL_LEG_ANALYTIC
    report = legendrian_defect(curve)
    return LegendrianCurve(curve, report.sup_defect, tol, dict(provenance or {}))


class LiftedCurve(Curve):
    """Legendrian lift of a smooth planar curve.

    ``z`` is integrated with 8-point Gauss-Legendre on every interval of the
    planar curve's grid (cumulative table), plus one partial interval for
    off-grid parameters.  The velocity is ``(x', y', y x')`` exactly.
    """

    def __init__(self, planar: Curve, z0: float = 0.0):
        if planar.dim != 2:
            raise ContractViolation("lifts are implemented for planar curves in R^2")
        self.projection = planar
        self.z0 = float(z0)
        self.domain = planar.domain
        self.closed = planar.closed
        self.dim = 3
        self.grid = planar.grid
        g = self.grid
        self._znodes = self.z0 + np.concatenate([[0.0], np.cumsum(self._gl(g[:-1], g[1:]))])

    def _gl(self, a, b):
        a, b = np.asarray(a, float), np.asarray(b, float)
        half = 0.5 * (b - a)
        s = (0.5 * (a + b))[:, None] + half[:, None] * _GL_NODES[None, :]
        P = self.projection(s.ravel())
        V = self.projection.derivative(s.ravel())
        f = (P[:, 1] * V[:, 0]).reshape(s.shape)
        return half * (f @ _GL_WEIGHTS)

    def z(self, t):
        tt = np.atleast_1d(np.asarray(t, float))
        k = np.clip(np.searchsorted(self.grid, tt, side="right") - 1, 0, self.grid.size - 1)
        out = self._znodes[k].copy()
        off = tt > self.grid[k]
        if np.any(off):
            out[off] += self._gl(self.grid[k[off]], tt[off])
        return out

    def __call__(self, t):
        t = np.asarray(t, float)
        tt = np.atleast_1d(t)
        out = np.column_stack([self.projection(tt), self.z(tt)])
        return out[0] if t.ndim == 0 else out

    def derivative(self, t):
        t = np.asarray(t, float)
        V = np.atleast_2d(self.projection.derivative(np.atleast_1d(t)))
        P = np.atleast_2d(self.projection(np.atleast_1d(t)))
        out = np.column_stack([V, P[:, 1] * V[:, 0]])
        return out[0] if t.ndim == 0 else out


def _lift_sampled(p: SampledCurve, z0: float) -> SampledCurve:
    pts = p.points
    dz = 0.5 * (pts[1:, 1] + pts[:-1, 1]) * np.diff(pts[:, 0])
    z = z0 + np.concatenate([[0.0], np.cumsum(dz)])
    return SampledCurve(p.t, np.column_stack([pts, z]), closed=p.closed)


def legendrian_lift(p, z0: float = 0.0, *, max_refinements: int = 3) -> LegendrianCurve:
    """Unique Legendrian curve over the planar curve ``p`` starting at height ``z0``.

    Sampled inputs are lifted exactly per segment.  If the centred-difference
    defect of the result exceeds ``1e-6`` the polyline is refined with a cubic
    spline through the original nodes (which are kept) and lifted again.
    """
    p = unwrap(p)
    if p.dim != 2:
        raise ContractViolation("legendrian_lift is implemented for n = 1 (planar input)")
    p.check_immersed("planar curve")
    if not isinstance(p, SampledCurve):
        return certify(LiftedCurve(p, z0), {"construction": "lift"})
    current = p
    for _ in range(max_refinements + 1):
        lifted = _lift_sampled(current, z0)
        report = legendrian_defect(lifted)
        if report.sup_defect <= TOL_LEG_SAMPLED:
            return LegendrianCurve(lifted, report.sup_defect, TOL_LEG_SAMPLED, {"construction": "lift"})
        # the difference-quotient defect decays like h^2
        factor = int(np.clip(np.ceil(np.sqrt(2.0 * report.sup_defect / TOL_LEG_SAMPLED)), 2, 64))
        refine = factor * (current.t.size - 1) // (p.t.size - 1)
        spline = p.to_analytic(refine=refine)
        pts = spline(spline.grid)
        pts[::refine] = p.points  # keep the original nodes bit for bit
        current = SampledCurve(spline.grid, pts, closed=p.closed)
    raise DegenerateInputError(f"sampled lift not certified: defect {report.sup_defect:.3g}")


# -- spiral ---------------------------------------------------------------------


class SpiralCurve(Curve):
    """Legendrian over an Archimedean spiral with radius band ``[eps/2, eps]``.

    The angle ``theta`` runs over ``[0, total_angle]`` with radius
    ``r = eps/2 + b theta``.  The curve parameter ``u in [0, 1]`` is chosen so
    that ``r(u)^3`` is affine in ``u``, which makes the height grow almost
    linearly in ``u``.  Clockwise turns raise z.  With ``y = y0 -+ r sin``
    the action has the closed form

        int y dx = y0 (x - x(0)) +- (r^3 - a^3) / (6 b) -+ r^2 sin(2 theta) / 4.
    """

    def __init__(self, z_gain, base, eps, z0, total_angle, samples_per_turn):
        self.z_gain, self.eps, self.z0 = float(z_gain), float(eps), float(z0)
        self.x0, self.y0 = map(float, base)
        self.sign = 1.0 if z_gain > 0 else -1.0
        self.total_angle = float(total_angle)
        self.a = eps / 2.0
        self.b = (eps - self.a) / self.total_angle
        self.domain = (0.0, 1.0)
        self.closed = False
        self.dim = 3
        m = int(samples_per_turn)
        theta = np.append(np.arange(0.0, self.total_angle, 2 * np.pi / m), self.total_angle)
        self.grid = self.u_of_theta(theta)
        self.grid[-1] = 1.0
        self.turns = self.total_angle / (2 * np.pi)

    @staticmethod
    def action(theta, eps, base, sign):
        """Height gained after angle ``theta`` (band fixed by ``theta`` as total angle)."""
        a = eps / 2.0
        b = (eps - a) / theta
        x0, y0 = base
        core = (eps**3 - a**3) / (6 * b) - eps**2 * math.sin(2 * theta) / 4.0
        dx = eps * math.cos(theta) - a
        return sign * core + y0 * dx

    def u_of_theta(self, theta):
        r = self.a + self.b * np.asarray(theta, float)
        return (r**3 - self.a**3) / (self.eps**3 - self.a**3)

    def _polar(self, u):
        u = np.asarray(u, float)
        r = np.cbrt(self.a**3 + u * (self.eps**3 - self.a**3))
        dr = (self.eps**3 - self.a**3) / (3.0 * r**2)
        theta = (r - self.a) / self.b
        return r, dr, theta, dr / self.b

    def __call__(self, u):
        u = np.asarray(u, float)
        uu = np.atleast_1d(u)
        r, _, th, _ = self._polar(uu)
        s = self.sign
        x = self.x0 + r * np.cos(th)
        y = self.y0 - s * r * np.sin(th)
        core = (r**3 - self.a**3) / (6 * self.b) - r**2 * np.sin(2 * th) / 4.0
        z = self.z0 + s * core + self.y0 * (x - (self.x0 + self.a))
        out = np.column_stack([x, y, z])
        return out[0] if u.ndim == 0 else out

    def derivative(self, u):
        u = np.asarray(u, float)
        uu = np.atleast_1d(u)
        r, dr, th, dth = self._polar(uu)
        s = self.sign
        dx = dr * np.cos(th) - r * np.sin(th) * dth
        dy = -s * (dr * np.sin(th) + r * np.cos(th) * dth)
        y = self.y0 - s * r * np.sin(th)
        out = np.column_stack([dx, dy, y * dx])
        return out[0] if u.ndim == 0 else out


def spiral_approximation(
    z_gain: float, base=(0.0, 0.0), eps: float = 0.1, *, z0: float = 0.0, samples_per_turn: int = 32
) -> LegendrianCurve:
    """Chord-free Legendrian C^0-close to the Reeb segment ``{(x0, y0, z0 + s z_gain)}``."""
    if not eps > 0:
        raise ContractViolation("eps must be positive")
    if z_gain == 0:
        raise ContractViolation("z_gain must be non-zero")
    sign = 1.0 if z_gain > 0 else -1.0
    base = tuple(map(float, base))

    def residual(theta):
        return SpiralCurve.action(theta, eps, base, sign) - z_gain

    # mean action per radian is 7 eps^2 / 24; bracket the root nearest to that estimate
    guess = 24.0 * abs(z_gain) / (7.0 * eps**2)
    width = 4 * np.pi + 2 * abs(base[1]) * 2 * eps * 24.0 / (7.0 * eps**2)
    grid = np.arange(max(np.pi / 16, guess - width), guess + width, np.pi / 16)
    vals = np.array([residual(th) for th in grid])
    changes = np.nonzero(np.sign(vals[:-1]) != np.sign(vals[1:]))[0]
    if changes.size == 0:
        raise DegenerateInputError("could not bracket the spiral angle; eps too large for the gain?")
    k = changes[np.argmin(np.abs(grid[changes] - guess))]
    theta = brentq(residual, grid[k], grid[k + 1], xtol=1e-14, rtol=1e-15)
    curve = SpiralCurve(z_gain, base, eps, z0, theta, samples_per_turn)
    return certify(
        curve, {"construction": "spiral", "epsilon": eps, "turns": curve.turns, "loops": 0}
    )


# -- wiggle -----------------------------------------------------------------------


class CurlCurve(Curve):
    """Prolate-trochoid curl replacing the chord from ``A`` to ``B``.

    In the frame ``T = (B - A)/|B - A|``, ``N = rot90(T)`` and with
    ``s = (t - t_a)/(t_b - t_a)``::

        u = d (s - 1/2) + rho sin(2 pi s),   v = side rho (1 - cos(2 pi s))

    where ``d = |B - A|``.  For ``2 pi rho > d`` the curl crosses itself once.
    Relative to the straight chord it changes ``int y dx`` by
    ``-side (pi rho^2 - d rho)``.
    """

    def __init__(self, A, B, rho, side, domain, samples=64):
        self.A, self.B = np.asarray(A, float), np.asarray(B, float)
        self.d = float(np.linalg.norm(self.B - self.A))
        self.T = (self.B - self.A) / self.d
        self.N = np.array([-self.T[1], self.T[0]])
        self.mid = 0.5 * (self.A + self.B)
        self.rho, self.side = float(rho), float(side)
        self.domain = tuple(map(float, domain))
        self.closed = False
        self.dim = 2
        self.grid = np.linspace(*self.domain, samples + 1)

    def _s(self, t):
        t0, t1 = self.domain
        return (np.asarray(t, float) - t0) / (t1 - t0), 1.0 / (t1 - t0)

    def __call__(self, t):
        t = np.asarray(t, float)
        s, _ = self._s(np.atleast_1d(t))
        u = self.d * (s - 0.5) + self.rho * np.sin(2 * np.pi * s)
        v = self.side * self.rho * (1 - np.cos(2 * np.pi * s))
        out = self.mid + u[:, None] * self.T + v[:, None] * self.N
        return out[0] if t.ndim == 0 else out

    def derivative(self, t):
        t = np.asarray(t, float)
        s, ds = self._s(np.atleast_1d(t))
        du = (self.d + 2 * np.pi * self.rho * np.cos(2 * np.pi * s)) * ds
        dv = self.side * 2 * np.pi * self.rho * np.sin(2 * np.pi * s) * ds
        out = du[:, None] * self.T + dv[:, None] * self.N
        return out[0] if t.ndim == 0 else out

    @property
    def action_change(self) -> float:
        return -self.side * (np.pi * self.rho**2 - self.d * self.rho)


def _restricted(curve: Curve, a: float, b: float, samples: int) -> AnalyticCurve:
    return AnalyticCurve(curve, curve.derivative, (a, b), grid=np.linspace(a, b, samples + 1))


def _chord_action(A, B):
    return 0.5 * (A[1] + B[1]) * (B[0] - A[0])


def _piece_action(curve: Curve, a: float, b: float) -> float:
    # Gauss-Legendre on 16 sub-intervals of a smooth base piece
    edges = np.linspace(a, b, 17)
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        half = 0.5 * (hi - lo)
        s = 0.5 * (lo + hi) + half * _GL_NODES
        P, V = curve(s), curve.derivative(s)
        total += half * float((P[:, 1] * V[:, 0]) @ _GL_WEIGHTS)
    return total


@dataclass
class WiggleResult:
    """Output of :func:`wiggle_approximation` with per-loop bookkeeping."""

    legendrian: LegendrianCurve
    loop_actions: np.ndarray
    loop_radii: np.ndarray
    windows: np.ndarray

    @property
    def curve(self):
        return self.legendrian.curve

    @property
    def loops(self) -> int:
        return int(self.loop_actions.size)


def wiggle_approximation(
    c,
    eps: float,
    *,
    window_fraction: float = 0.5,
    fill: float = 0.8,
    curl_samples: int = 64,
    base_samples: int = 8,
) -> WiggleResult:
    """Legendrian approximation of ``c`` within C^0 distance about ``eps``.

    The domain is split into ``K`` equal pieces.  On the last
    ``window_fraction`` of each piece the projection of ``c`` is replaced by a
    curl of radius at most ``eps/2`` whose action correction brings the lift
    back to ``z_c`` at the end of the window.  ``K`` starts from the area
    bound ``K >= |defect| / (fill * pi (eps/2)^2)`` and grows until every curl
    fits.  A Legendrian input gets no curls at all.
    """
    c = unwrap(c)
    if not eps > 0:
        raise ContractViolation("eps must be positive")
    if c.dim != 3:
        raise ContractViolation("wiggle_approximation is implemented for n = 1")
    if isinstance(c, SampledCurve):
        c = c.to_analytic()
    c.check_immersed()
    V = c.derivative(c.refined_grid())
    planar_speed = np.linalg.norm(V[:, :2], axis=1)
    if np.min(planar_speed / np.linalg.norm(V, axis=1)) < 1e-9:
        raise DegenerateInputError("Reeb field is tangent to the curve somewhere")

    proj = lagrangian_projection(c)
    t0, t1 = c.domain
    z_start = float(c(t0)[2])

    report = legendrian_defect(c)
    abs_defect = abs_defect_integral(c)
    if abs_defect <= 1e-12:
        lifted = LiftedCurve(_restricted(proj, t0, t1, max(c.grid.size - 1, 16)), z_start)
        leg = certify(lifted, {"construction": "wiggle", "epsilon": eps, "loops": 0, "turns": 0})
        return WiggleResult(leg, np.zeros(0), np.zeros(0), np.zeros((0, 2)))

    cap = np.pi * (eps / 2) ** 2
    K = max(1, math.ceil(abs_defect / (fill * cap)))
    for _ in range(60):
        plan = _plan_curls(c, proj, K, eps, window_fraction)
        if plan is not None:
            break
        K = math.ceil(K * 1.25)
    else:  # pragma: no cover - only for pathological inputs
        raise DegenerateInputError("could not fit curls of radius eps/2")

    pieces, actions, radii, windows = [], [], [], []
    per_piece = max(base_samples, 2)
    for (a, b0, b1, rho, side) in plan:
        if b0 > a:
            pieces.append(_restricted(proj, a, b0, per_piece))
        if rho is None:
            pieces.append(_restricted(proj, b0, b1, per_piece))
            continue
        curl = CurlCurve(proj(b0), proj(b1), rho, side, (b0, b1), samples=curl_samples)
        pieces.append(curl)
        actions.append(curl.action_change)
        radii.append(rho)
        windows.append((b0, b1))
    planar = PiecewiseCurve(pieces)
    lifted = LiftedCurve(planar, z_start)
    leg = certify(
        lifted,
        {"construction": "wiggle", "epsilon": eps, "loops": len(actions), "turns": len(actions),
         "total_defect": report.total_defect},
    )
    return WiggleResult(leg, np.array(actions), np.array(radii), np.array(windows).reshape(-1, 2))


def abs_defect_integral(c: Curve) -> float:
    """``int |alpha(c')| dt``; the total action the curls must supply."""
    from .curves import integrate_along

    return integrate_along(c, lambda P, V: np.abs(V[:, 2] - P[:, 1] * V[:, 0]))


def _plan_curls(c, proj, K, eps, window_fraction):
    t0, t1 = c.domain
    edges = np.linspace(t0, t1, K + 1)
    h = edges[1] - edges[0]
    plan = []
    prev_end = t0
    z_prev = float(c(t0)[2])
    for k in range(K):
        b1 = edges[k + 1]
        b0 = b1 - window_fraction * h
        A, B = proj(b0), proj(b1)
        d = float(np.linalg.norm(B - A))
        z_target = float(c(b1)[2])
        needed = z_target - z_prev - _piece_action(proj, prev_end, b0) - _chord_action(A, B)
        if abs(needed) <= 1e-13 or d == 0.0:
            if d == 0.0 and abs(needed) > 1e-13:
                return None
            # nothing to cancel: keep the base curve; carry the height forward
            plan.append((prev_end, b0, b1, None, 0.0))
            z_prev = z_prev + _piece_action(proj, prev_end, b1)
            prev_end = b1
            continue
        # -side (pi rho^2 - d rho) = needed, side = -sign(needed)
        rho = (d + math.sqrt(d * d + 4 * math.pi * abs(needed))) / (2 * math.pi)
        if rho > eps / 2:
            return None
        plan.append((prev_end, b0, b1, rho, -math.copysign(1.0, needed)))
        z_prev = z_target
        prev_end = b1
    return plan


# -- suspension ---------------------------------------------------------------------


@dataclass
class SuspensionMap:
    """Cylinder ``F(x, t) = (f(x) + g1(t) R, g2(t))`` in ``M x [a, b]``.

    ``loop`` is a closed planar curve ``t -> (g1(t), g2(t))``; the Reeb flow of
    the standard form is translation in z, so ``phi_{g1}`` adds ``g1`` to z.
    """

    base: Curve
    loop: Curve
    s_range: tuple[float, float]

    def __post_init__(self):
        from .chords import find_self_chords_planar

        self.base = unwrap(self.base)
        self.loop = unwrap(self.loop)
        if self.loop.dim != 2 or not self.loop.closed:
            raise ContractViolation("loop must be a closed planar curve")
        _, pts = self.loop.polyline()
        a, b = self.s_range
        if np.min(pts[:, 0]) < -1e-12:
            raise ContractViolation("Reeb-time coordinate of the loop must be >= 0")
        if np.min(pts[:, 1]) < a - 1e-12 or np.max(pts[:, 1]) > b + 1e-12:
            raise ContractViolation("loop leaves the s-range [a, b]")
        if find_self_chords_planar(self.loop):
            raise ContractViolation("loop is not embedded")

    def __call__(self, x, t):
        x, t = np.broadcast_arrays(np.asarray(x, float), np.asarray(t, float))
        f = self.base(x.ravel())
        g = self.loop(t.ravel())
        pt = f.copy()
        pt[:, -1] += g[:, 0]
        return np.column_stack([pt, g[:, 1]]).reshape(x.shape + (f.shape[1] + 1,))


def symplectization_form(point, u, w):
    """``d(e^s alpha)(u, w) = e^s (ds ^ alpha + d alpha)(u, w)`` on ``M x R`` (n = 1)."""
    point, u, w = (np.asarray(v, float) for v in (point, u, w))
    s, y = point[..., 3], point[..., 1]

    def alpha(v):
        return v[..., 2] - y * v[..., 0]

    dalpha = u[..., 0] * w[..., 1] - u[..., 1] * w[..., 0]
    return np.exp(s) * (u[..., 3] * alpha(w) - w[..., 3] * alpha(u) + dalpha)


def suspension_pullback_norm(m: SuspensionMap, resolution: int = 64, step: float = 1e-5) -> float:
    """Max of ``|F^* d(e^s alpha)(d/dx, d/dt)|`` over a ``resolution^2`` grid.

    Tangents are centred differences of ``F`` with a small parameter step.
    """
    x0, x1 = m.base.domain
    l0, l1 = m.loop.domain
    hx = step * (x1 - x0)
    ht = step * (l1 - l0)
    xs = np.linspace(x0 + hx, x1 - hx, resolution)
    ts = np.linspace(l0, l1, resolution, endpoint=not m.loop.closed)
    X, T = np.meshgrid(xs, ts, indexing="ij")
    F = m(X, T)
    dX = (m(X + hx, T) - m(X - hx, T)) / (2 * hx)
    dT = (m(X, T + ht) - m(X, T - ht)) / (2 * ht)
    return float(np.max(np.abs(symplectization_form(F, dX, dT))))
