"""Contact Hamiltonians, their vector fields and flows.

For ``alpha = dz - sum y_i dx_i`` the field ``X_H`` with ``alpha(X_H) = H``
and ``i_{X_H} d alpha = -dH`` on xi has components

    x_i' = -H_{y_i},   y_i' = H_{x_i} + y_i H_z,   z' = H - sum_i y_i H_{y_i}.

Flows are integrated with classical RK4 at a fixed step count; the result is
compared with the run at half the steps and the Richardson estimate
``|y_N - y_{N/2}| / 15`` must stay below the requested tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import sympy
from scipy.optimize import brentq
from scipy.spatial import cKDTree

from .chords import ChordReport, find_chords_between
from .core import ContactModel
from .curves import Curve, SampledCurve, unwrap
from .errors import ContractViolation, DegenerateInputError, IntegrationAccuracyError
from .expressions import VARIABLES, parse_expression

FD_REL_STEP = 1e-5
VALIDATION_POINTS = 100
VALIDATION_TOL = 1e-4
STEPS_PER_UNIT = 10_000
FLOW_TOL = 1e-6


def _fd_gradient(func, p, s, dim):
    """Central differences with step ``h = 1e-5 (1 + |p_k|)``."""
    p = np.asarray(p, float)
    grad = np.empty(p.shape)
    for k in range(dim):
        h = FD_REL_STEP * (1.0 + np.abs(p[..., k]))
        e = np.zeros(dim)
        e[k] = 1.0
        hp = h[..., None] * e
        grad[..., k] = (func(p + hp, s) - func(p - hp, s)) / (2 * h)
    return grad


class ContactHamiltonian:
    """A (possibly time dependent) function ``H(p, s)`` on R^{2n+1}.

    Parameters
    ----------
    func : callable
        ``func(points, s)`` evaluating H on an array of shape ``(..., 2n+1)``.
    grad : callable, optional
        ``grad(points, s)`` returning the full gradient. When omitted, central
        finite differences are used.
    n : int
        Half dimension of the contact manifold.
    time_dependent : bool
        Whether ``s`` actually enters ``func``.
    name : str, optional
        Label used in reports.
    """

    def __init__(self, func, grad=None, *, n: int = 1, time_dependent: bool = False, name: str | None = None):
        self.model = ContactModel(n)
        self._func = func
        self._grad = grad
        self.time_dependent = bool(time_dependent)
        self.name = name or getattr(func, "__name__", "H")
        self._validated = grad is None

    def __repr__(self):
        return f"ContactHamiltonian({self.name!r}, n={self.n})"

    @property
    def n(self) -> int:
        return self.model.n

    @property
    def dim(self) -> int:
        return self.model.dim

    @property
    def has_analytic_gradient(self) -> bool:
        return self._grad is not None

    def value(self, p, s=0.0):
        p = self.model._check(p)
        return np.broadcast_to(np.asarray(self._func(p, s), float), p.shape[:-1]).copy()

    __call__ = value

    def gradient(self, p, s=0.0):
        p = self.model._check(p)
        if self._grad is None:
            return _fd_gradient(self.value, p, s, self.dim)
        return np.broadcast_to(np.asarray(self._grad(p, s), float), p.shape).copy()

    def fd_gradient(self, p, s=0.0):
        return _fd_gradient(self.value, self.model._check(p), s, self.dim)

    def validate(self, points: int = VALIDATION_POINTS, seed: int = 0, box: float = 2.0) -> float:
        """Compare the analytic gradient with central differences.

        Returns the largest relative error and raises ``ContractViolation``
        when it is not below ``1e-4``.
        """
        rng = np.random.default_rng(seed)
        p = rng.uniform(-box, box, size=(points, self.dim))
        s = rng.uniform(0.0, 1.0, size=points) if self.time_dependent else 0.0
        exact = self.gradient(p, s)
        approx = self.fd_gradient(p, s)
        scale = np.maximum(1.0, np.abs(approx))
        err = float(np.max(np.abs(exact - approx) / scale))
        if not err < VALIDATION_TOL:
            raise ContractViolation(f"gradient of {self.name} disagrees with finite differences (rel. error {err:.2e})")
        self._validated = True
        return err

    def ensure_valid(self):
        if not self._validated:
            self.validate()

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_expression(cls, text: str, name: str | None = None) -> "ContactHamiltonian":
        """Hamiltonian on R^3 from an arithmetic expression in ``x, y, z, s``."""
        expr = parse_expression(text)
        syms = sympy.symbols(VARIABLES, real=True)
        x, y, z, s = syms
        f = sympy.lambdify(syms, expr, "numpy")
        grads = [sympy.lambdify(syms, sympy.diff(expr, v), "numpy") for v in (x, y, z)]

        def func(p, s_):
            return f(p[..., 0], p[..., 1], p[..., 2], s_)

        def grad(p, s_):
            shape = p.shape[:-1]
            cols = [np.broadcast_to(g(p[..., 0], p[..., 1], p[..., 2], s_), shape) for g in grads]
            return np.stack(cols, axis=-1)

        return cls(func, grad, n=1, time_dependent=s in expr.free_symbols, name=name or text)


def _reeb_value(p, s):
    return np.ones(p.shape[:-1])


def _reeb_grad(p, s):
    return np.zeros(p.shape)


def _radial_value(p, s):
    return 2 * p[..., 2] - p[..., 0] * p[..., 1]


def _radial_grad(p, s):
    return np.stack([-p[..., 1], -p[..., 0], np.full(p.shape[:-1], 2.0)], axis=-1)


def _coord_x_value(p, s):
    return p[..., 0].copy()


def _coord_x_grad(p, s):
    g = np.zeros(p.shape)
    g[..., 0] = 1.0
    return g


BUILTINS = {
    "reeb": lambda: ContactHamiltonian(_reeb_value, _reeb_grad, name="reeb"),
    "radial": lambda: ContactHamiltonian(_radial_value, _radial_grad, name="radial"),
    "coordinate-x": lambda: ContactHamiltonian(_coord_x_value, _coord_x_grad, name="coordinate-x"),
}


def hamiltonian(source) -> ContactHamiltonian:
    """Resolve a registry name or an expression string to a Hamiltonian."""
    if isinstance(source, ContactHamiltonian):
        return source
    if source in BUILTINS:
        return BUILTINS[source]()
    return ContactHamiltonian.from_expression(str(source))


# -- the vector field ---------------------------------------------------------


def contact_vector_field(H: ContactHamiltonian, p, s=0.0) -> np.ndarray:
    """Components of ``X_H`` at the point(s) ``p``."""
    H.ensure_valid()
    p = H.model._check(p)
    n = H.n
    val = H.value(p, s)
    dH = H.gradient(p, s)
    Hx, Hy, Hz = dH[..., :n], dH[..., n : 2 * n], dH[..., -1]
    y = p[..., n : 2 * n]
    X = np.empty(p.shape)
    X[..., :n] = -Hy
    X[..., n : 2 * n] = Hx + y * Hz[..., None]
    X[..., -1] = val - np.sum(y * Hy, axis=-1)
    return X


def defining_relation_residuals(H: ContactHamiltonian, p, s=0.0) -> tuple[float, float]:
    """``max |alpha(X) - H|`` and ``max |d alpha(X, v) + dH(v)|`` over the xi-frame."""
    model = H.model
    p = model._check(p)
    X = contact_vector_field(H, p, s)
    r_alpha = float(np.max(np.abs(model.alpha(p, X) - H.value(p, s))))
    frame = model.xi_frame(p)  # (..., 2n, dim)
    dH = H.gradient(p, s)
    r_d = 0.0
    for k in range(2 * model.n):
        v = frame[..., k, :]
        lhs = model.dalpha_ambient(X, v)
        r_d = max(r_d, float(np.max(np.abs(lhs + np.sum(dH * v, axis=-1)))))
    return r_alpha, r_d


# -- integration --------------------------------------------------------------


def rk4(field, y0, t: float, steps: int, t0: float = 0.0) -> np.ndarray:
    """Classical RK4 for ``y' = field(y, s)`` with a fixed number of steps."""
    y = np.array(y0, dtype=float)
    h = t / steps
    s = t0
    for _ in range(steps):
        k1 = field(y, s)
        k2 = field(y + 0.5 * h * k1, s + 0.5 * h)
        k3 = field(y + 0.5 * h * k2, s + 0.5 * h)
        k4 = field(y + h * k3, s + h)
        y = y + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        s += h
    return y


@dataclass
class FlowResult:
    """Image of points (or a curve) under the time-``t`` flow."""

    time: float
    points: np.ndarray
    conformal_residual: np.ndarray
    conformal_factor: np.ndarray  # g with phi^* alpha = e^g alpha
    steps: int
    error_estimate: float
    curve: Curve | None = None
    source: np.ndarray | None = field(default=None, repr=False)

    @property
    def max_residual(self) -> float:
        return float(np.max(self.conformal_residual)) if self.conformal_residual.size else 0.0


def _flow_points(H, P, t, steps, tol):
    """RK4 image of ``P`` with the Richardson monitor; returns (image, estimate)."""
    field_ = lambda y, s: contact_vector_field(H, y, s)  # noqa: E731
    full = rk4(field_, P, t, steps)
    half = rk4(field_, P, t, steps // 2)
    err = float(np.max(np.abs(full - half))) / 15.0 if P.size else 0.0
    if not np.all(np.isfinite(full)) or not err <= tol:
        raise IntegrationAccuracyError(
            f"RK4 error estimate {err:.3g} exceeds {tol:g} at t={t:g} with {steps} steps"
        )
    return full, err


def flow(H, target, t: float, *, steps_per_unit: int = STEPS_PER_UNIT, tol: float = FLOW_TOL,
         fd_step: float = 1e-5, residuals: bool = True) -> FlowResult:
    """Push a point, an array of points or a curve forward by the flow of ``X_H``.

    The conformal data come from a central-difference Jacobian of the flow
    map: ``beta = phi^* alpha`` is evaluated on the Reeb vector (giving
    ``e^g``) and on the xi-frame, where it must vanish for a contactomorphism;
    the norm of those values is the residual.
    """
    H = hamiltonian(H)
    model = H.model
    t = float(t)
    if not np.isfinite(t):
        raise ContractViolation("flow time must be finite")
    curve_in = None
    if isinstance(target, Curve) or hasattr(target, "curve"):
        curve_in = unwrap(target)
        tgrid, P = curve_in.polyline()
    else:
        P = model._check(target)
    single = P.ndim == 1
    P2 = np.atleast_2d(P)
    steps = max(2, int(np.ceil(steps_per_unit * abs(t))))
    steps += steps % 2
    m, dim = P2.shape
    if t == 0.0:
        image, err, steps = P2.copy(), 0.0, 0
        res, g = np.zeros(m), np.zeros(m)
    else:
        if residuals:
            h = fd_step * (1.0 + np.abs(P2))  # (m, dim)
            offsets = np.zeros((2 * dim, m, dim))
            for k in range(dim):
                offsets[2 * k, :, k] = h[:, k]
                offsets[2 * k + 1, :, k] = -h[:, k]
            stack = np.concatenate([P2[None], P2[None] + offsets], axis=0)
            out, err = _flow_points(H, stack, t, steps, tol)
            image = out[0]
            jac = np.empty((m, dim, dim))  # jac[:, :, k] = D phi e_k
            for k in range(dim):
                jac[:, :, k] = (out[1 + 2 * k] - out[2 + 2 * k]) / (2 * h[:, k, None])
            res, g = _conformal_data(model, P2, image, jac)
        else:
            image, err = _flow_points(H, P2, t, steps, tol)
            res, g = np.full(m, np.nan), np.full(m, np.nan)
    curve_out = None
    if curve_in is not None:
        curve_out = SampledCurve(tgrid, image, closed=curve_in.closed)
    pts = image[0] if single else image
    return FlowResult(t, pts, res, g, steps, err, curve_out, P)


def _conformal_data(model: ContactModel, P, image, jac):
    """Residual and log-factor of ``phi^* alpha`` from the Jacobian at ``P``."""
    # beta_p(v) = alpha_{phi(p)}(D phi v); as a covector beta = alpha_row @ jac
    row = np.zeros(image.shape)
    row[:, -1] = 1.0
    row[:, : model.n] = -model.ys(image)
    beta = np.einsum("mi,mik->mk", row, jac)
    frame = model.xi_frame(P)  # (m, 2n, dim)
    on_xi = np.einsum("mk,mjk->mj", beta, frame)
    on_reeb = beta[:, -1]
    residual = np.linalg.norm(on_xi, axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        g = np.log(on_reeb)
    return residual, g


def rk4_order(H, p, t: float, exact, steps=(16, 32, 64, 128)) -> np.ndarray:
    """Observed orders ``log2(e_k / e_{k+1})`` over successive step halvings."""
    H = hamiltonian(H)
    field_ = lambda y, s: contact_vector_field(H, y, s)  # noqa: E731
    errs = np.array([np.max(np.abs(rk4(field_, p, t, n) - exact)) for n in steps])
    return np.log2(errs[:-1] / errs[1:])


# -- tangency margin ----------------------------------------------------------


def _as_field(X):
    if isinstance(X, (ContactHamiltonian, str)):
        H = hamiltonian(X)
        return lambda p: contact_vector_field(H, p)
    return X


def _margin_terms(L: Curve, Xf, t):
    P, V = L(t), L.derivative(t)
    R = L.model.reeb(P)
    X = np.asarray(Xf(P), float)
    det = np.linalg.det(np.stack([V, R, X], axis=-2))
    scale = np.linalg.norm(V, axis=-1) * np.linalg.norm(R, axis=-1) * np.linalg.norm(X, axis=-1)
    return det, scale


def tangency_profile(X, L, t=None):
    """Normalised ``det[L' | R | X]`` along ``L`` (0 where X vanishes)."""
    L = unwrap(L)
    if L.dim != 3:
        raise ContractViolation("tangency margin is implemented for n = 1")
    t = L.grid if t is None else np.asarray(t, float)
    V = L.derivative(t)
    speed = np.linalg.norm(V, axis=-1)
    planar = np.linalg.norm(V[..., :2], axis=-1)
    if np.any(speed < 1e-12) or np.any(planar / np.maximum(speed, 1e-300) < 1e-9):
        raise DegenerateInputError("Reeb field is tangent to L (or L is not immersed)")
    det, scale = _margin_terms(L, _as_field(X), t)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(scale > 0, det / scale, 0.0)
    return out


def tangency_margin(X, L) -> float:
    """``min |det[L' | R | X]| / (|L'| |R| |X|)`` along ``L``.

    ``X`` is a vector field callable on points, a Hamiltonian or a registry
    name. Sign changes between grid samples are located with Brent's method,
    so a field that passes through ``T L + <R>`` between samples is reported
    with margin (numerically) zero.
    """
    L = unwrap(L)
    t = L.grid
    prof = tangency_profile(X, L, t)
    best = float(np.min(np.abs(prof)))
    Xf = _as_field(X)
    f = lambda u: float(tangency_profile(Xf, L, np.array([u]))[0])  # noqa: E731
    flips = np.nonzero(np.sign(prof[:-1]) * np.sign(prof[1:]) < 0)[0]
    for i in flips:
        root = brentq(f, t[i], t[i + 1], xtol=1e-14)
        best = min(best, abs(f(root)))
    return best


# -- displacement -------------------------------------------------------------


@dataclass
class DisplacementRow:
    time: float
    chord_count: int
    crossings: int
    min_len: float
    min_distance: float
    disjoint: bool
    margin: float
    status: str = "ok"

    def as_row(self) -> dict:
        return {
            "t": self.time,
            "chord_count": self.chord_count,
            "crossings": self.crossings,
            "min_len": self.min_len,
            "min_distance": self.min_distance,
            "disjoint": int(self.disjoint),
            "margin": self.margin,
            "status": self.status,
        }


@dataclass
class DisplacementReport:
    rows: list[DisplacementRow]
    first_disjoint_time: float | None


def _trace_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Minimal distance between vertex sets of two planar polylines."""
    d, _ = cKDTree(b).query(a, k=1)
    return float(np.min(d))


def displacement_experiment(H, L, times, **flow_kw) -> DisplacementReport:
    """Flow ``L`` for each time and record the chords between ``L`` and its image."""
    H = hamiltonian(H)
    L = unwrap(L)
    times = [float(t) for t in times]
    if not times:
        raise ContractViolation("need at least one time")
    try:
        margin = tangency_margin(H, L)
    except DegenerateInputError:
        margin = float("nan")
    rows = []
    first = None
    _, P = L.polyline()
    for t in times:
        res = flow(H, L, t, residuals=False, **flow_kw)
        img = res.curve
        dist = _trace_distance(P[:, :2], img.polyline()[1][:, :2])
        try:
            rep: ChordReport = find_chords_between(L, img)
        except DegenerateInputError as exc:
            rows.append(DisplacementRow(t, -1, -1, float("nan"), dist, False, margin, f"degenerate: {exc}"))
            continue
        crossings = rep.count + len(rep.suspects)
        disjoint = crossings == 0 and dist > 0.0
        rows.append(DisplacementRow(t, rep.count, crossings, rep.min_length, dist, disjoint, margin))
        if first is None and rep.count == 0 and disjoint:
            first = t
    return DisplacementReport(rows, first)


# -- norms --------------------------------------------------------------------


@dataclass(frozen=True)
class NormReport:
    osc_norm: float
    positive_norm: float
    min_integral: float
    error_bar: float
    box: tuple
    resolution: int
    time_samples: int

    def as_row(self) -> dict:
        return {
            "osc_norm": self.osc_norm,
            "positive_norm": self.positive_norm,
            "min_integral": self.min_integral,
            "error_bar": self.error_bar,
            "resolution": self.resolution,
            "time_samples": self.time_samples,
        }


def _check_box(box, dim):
    box = np.asarray(box, float)
    if box.shape != (dim, 2) or not np.all(np.isfinite(box)):
        raise ContractViolation(f"box must be {dim} finite (lo, hi) pairs")
    if np.any(box[:, 1] <= box[:, 0]):
        raise ContractViolation("box is empty")
    return box


def hofer_osc_norm(H, box, resolution: int = 64, time_samples: int = 64) -> NormReport:
    """Oscillation and positive norms of ``H`` truncated to ``box``.

    Space is sampled on an inclusive tensor grid with ``resolution`` points
    per axis; for time dependent H the time integral uses the trapezoidal
    rule on ``time_samples >= 64`` nodes. The error bar bounds how far the
    true max (or min) over the box can exceed the grid value, using the
    largest sampled gradient as a Lipschitz constant.
    """
    H = hamiltonian(H)
    box = _check_box(box, H.dim)
    if resolution < 2:
        raise ContractViolation("resolution must be at least 2")
    axes = [np.linspace(lo, hi, resolution) for lo, hi in box]
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, H.dim)
    half_diag = 0.5 * float(np.linalg.norm((box[:, 1] - box[:, 0]) / (resolution - 1)))
    if H.time_dependent:
        if time_samples < 64:
            raise ContractViolation("time dependent norms need at least 64 time samples")
        svals = np.linspace(0.0, 1.0, time_samples)
    else:
        svals = np.array([0.0])
    mx, mn, lip = np.empty(len(svals)), np.empty(len(svals)), 0.0
    for i, s in enumerate(svals):
        vals = H.value(grid, s)
        mx[i], mn[i] = vals.max(), vals.min()
        lip = max(lip, float(np.max(np.linalg.norm(H.gradient(grid, s), axis=-1))))
    if H.time_dependent:
        pos, low = float(np.trapezoid(mx, svals)), float(np.trapezoid(mn, svals))
    else:
        pos, low = float(mx[0]), float(mn[0])
    return NormReport(pos - low, pos, low, 2 * lip * half_diag, tuple(tuple(float(v) for v in row) for row in box), resolution, len(svals))


def displacement_energy_upper_bound(family, L, times, box, resolution: int = 32):
    """Smallest ``t * osc(H)`` over ``family`` for which the time-``t`` flow displaces ``L``.

    Returns ``(bound, name, time)`` or ``(inf, None, None)`` when no member of
    the family displaces ``L`` at the given times.
    """
    best = (float("inf"), None, None)
    for H in family:
        H = hamiltonian(H)
        rep = displacement_experiment(H, L, times)
        if rep.first_disjoint_time is None:
            continue
        osc = hofer_osc_norm(H, box, resolution).osc_norm
        value = abs(rep.first_disjoint_time) * osc
        if value < best[0]:
            best = (value, H.name, rep.first_disjoint_time)
    return best
