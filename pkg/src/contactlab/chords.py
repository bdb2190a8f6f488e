"""Reeb chords of curves in standard contact 3-space.

In ``(R^3, dz - y dx)`` the Reeb flow is vertical translation, so a Reeb
chord is a pair of parameters whose Lagrangian projections coincide; its
length is the height difference.  Chords are found from crossings of the
projected polylines:

1. candidate segment pairs come from a uniform spatial hash (cell size =
   longest segment), or from all pairs for the brute-force oracle;
2. each candidate is tested exactly (parametric solve for the hash path,
   orientation predicates for the oracle);
3. crossings on curves with analytic derivatives are polished by Newton's
   method on ``pi a(s) = pi b(t)`` until the planar mismatch is below
   ``TAU_XY``;
4. nearly tangential crossings go to a separate ``suspects`` list.

Reports are sorted by ``(s, t)`` and deduplicated, so the output does not
depend on the candidate generator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .constructions import legendrian_lift, spiral_approximation, wiggle_approximation
from .curves import (
    Curve,
    SampledCurve,
    c0_distance,
    lagrangian_projection,
    legendrian_defect,
    point_polyline_distance,
    unwrap,
)
from .errors import ContractViolation, DegenerateInputError

TAU_XY = 1e-9
TAU_PARAM_REL = 1e-6
TANGENCY_TOL = 1e-8
_EDGE_TOL = 1e-12


@dataclass(frozen=True)
class ReebChord:
    """Vertical segment from ``a(s)`` to ``b(t)``; ``signed_length = z_b(t) - z_a(s)``."""

    s: float
    t: float
    planar_point: tuple
    signed_length: float

    @property
    def length(self) -> float:
        return abs(self.signed_length)

    def to_dict(self) -> dict:
        return {
            "s": self.s,
            "t": self.t,
            "point": list(self.planar_point),
            "signed_length": self.signed_length,
            "length": self.length,
        }


@dataclass(frozen=True)
class ChordReport:
    chords: tuple = ()
    suspects: tuple = field(default=())

    @property
    def count(self) -> int:
        return len(self.chords)

    @property
    def lengths(self) -> np.ndarray:
        return np.array([c.length for c in self.chords])

    @property
    def min_length(self) -> float:
        return float(self.lengths.min()) if self.chords else math.nan

    @property
    def max_length(self) -> float:
        return float(self.lengths.max()) if self.chords else math.nan

    @property
    def total_length(self) -> float:
        return float(self.lengths.sum()) if self.chords else 0.0

    def to_dict(self) -> dict:
        return {
            "count": self.count,
            "min_length": None if not self.chords else self.min_length,
            "max_length": None if not self.chords else self.max_length,
            "total_length": self.total_length,
            "chords": [c.to_dict() for c in self.chords],
            "suspects": [c.to_dict() for c in self.suspects],
        }


# -- segment geometry -----------------------------------------------------------


@dataclass
class _Polyline:
    t: np.ndarray  # parameters of the vertices
    P: np.ndarray  # planar vertices
    z: np.ndarray | None
    closed: bool

    @property
    def A(self):
        return self.P[:-1]

    @property
    def B(self):
        return self.P[1:]

    @property
    def m(self):
        return self.P.shape[0] - 1

    def wraps(self) -> bool:
        return self.closed and np.array_equal(self.P[0], self.P[-1])


def _polyline(curve, closed=None) -> _Polyline:
    if isinstance(curve, np.ndarray):
        P = np.asarray(curve, float)
        t = np.arange(P.shape[0], dtype=float)
        poly = _Polyline(t, P[:, :2], P[:, 2] if P.shape[1] > 2 else None, bool(closed))
    else:
        curve = unwrap(curve)
        t, P = curve.polyline()
        poly = _Polyline(np.array(t, float), P[:, :2], P[:, -1] if curve.dim == 3 else None, curve.closed)
    scale = 1.0 + float(np.max(np.abs(poly.P))) if poly.P.size else 1.0
    if poly.closed and np.max(np.abs(poly.P[0] - poly.P[-1])) <= 1e-12 * scale:
        # endpoints equal up to rounding: treat as an explicitly closed polygon
        poly.P = poly.P.copy()
        poly.P[-1] = poly.P[0]
    elif poly.closed:
        # close with an extra segment; its parameter runs one grid step past the end
        step = poly.t[-1] - poly.t[-2]
        poly.t = np.append(poly.t, poly.t[-1] + step)
        poly.P = np.vstack([poly.P, poly.P[:1]])
        if poly.z is not None:
            poly.z = np.append(poly.z, poly.z[0])
    return poly


def _cross(u, v):
    return u[..., 0] * v[..., 1] - u[..., 1] * v[..., 0]


def _hash_pairs(A, B):
    """Candidate pairs ``(i, j), i < j`` of segments sharing a hash cell."""
    lengths = np.linalg.norm(B - A, axis=1)
    cell = float(lengths.max())
    if cell == 0.0:
        return np.zeros((0, 2), dtype=np.int64)
    lo = np.floor(np.minimum(A, B) / cell).astype(np.int64)
    hi = np.floor(np.maximum(A, B) / cell).astype(np.int64)
    segs, keys = [], []
    idx = np.arange(A.shape[0])
    for dx in (0, 1):
        for dy in (0, 1):
            mask = (lo[:, 0] + dx <= hi[:, 0]) & (lo[:, 1] + dy <= hi[:, 1])
            segs.append(idx[mask])
            keys.append(np.column_stack([lo[mask, 0] + dx, lo[mask, 1] + dy]))
    segs = np.concatenate(segs)
    keys = np.concatenate(keys)
    _, group = np.unique(keys, axis=0, return_inverse=True)
    group = group.ravel()
    order = np.lexsort((segs, group))
    segs, group = segs[order], group[order]
    starts = np.flatnonzero(np.r_[True, group[1:] != group[:-1]])
    sizes = np.diff(np.r_[starts, group.size])
    out = []
    for k in np.unique(sizes):
        if k < 2:
            continue
        first = starts[sizes == k]
        members = segs[first[:, None] + np.arange(k)[None, :]]  # (G, k), sorted per row
        iu, ju = np.triu_indices(k, 1)
        out.append(np.column_stack([members[:, iu].ravel(), members[:, ju].ravel()]))
    if not out:
        return np.zeros((0, 2), dtype=np.int64)
    pairs = np.concatenate(out)
    m = A.shape[0]
    code = np.unique(pairs[:, 0] * m + pairs[:, 1])
    return np.column_stack([code // m, code % m])


def _brute_pairs(A, B, block=256):
    """Every pair ``i < j`` whose bounding boxes meet; no spatial structure."""
    lo, hi = np.minimum(A, B), np.maximum(A, B)
    m = A.shape[0]
    out = []
    for start in range(0, m, block):
        i = np.arange(start, min(start + block, m))
        j = np.arange(start + 1, m)
        meet = (
            (lo[i, None, 0] <= hi[None, j, 0]) & (lo[None, j, 0] <= hi[i, None, 0])
            & (lo[i, None, 1] <= hi[None, j, 1]) & (lo[None, j, 1] <= hi[i, None, 1])
            & (j[None, :] > i[:, None])
        )
        ii, jj = np.nonzero(meet)
        out.append(np.column_stack([i[ii], j[jj]]))
    return np.concatenate(out) if out else np.zeros((0, 2), dtype=np.int64)


def _intersect_parametric(A1, B1, A2, B2):
    """Returns ``(hit, overlap, lam, mu)`` for segment pairs (hash path)."""
    d1, d2, w = B1 - A1, B2 - A2, A2 - A1
    den = _cross(d1, d2)
    n1, n2 = np.linalg.norm(d1, axis=1), np.linalg.norm(d2, axis=1)
    scale = n1 * n2
    parallel = np.abs(den) <= 1e-14 * scale
    with np.errstate(divide="ignore", invalid="ignore"):
        lam = np.where(parallel, np.nan, _cross(w, d2) / den)
        mu = np.where(parallel, np.nan, _cross(w, d1) / den)
    hit = ~parallel & (lam >= -_EDGE_TOL) & (lam <= 1 + _EDGE_TOL) & (mu >= -_EDGE_TOL) & (mu <= 1 + _EDGE_TOL)
    overlap = parallel & _collinear_overlap(A1, d1, A2, B2, n1)
    return hit, overlap, np.clip(lam, 0, 1), np.clip(mu, 0, 1)


def _collinear_overlap(A1, d1, A2, B2, n1):
    with np.errstate(divide="ignore", invalid="ignore"):
        off = np.abs(_cross(d1, A2 - A1)) / n1
        u1 = np.einsum("ij,ij->i", A2 - A1, d1) / n1**2
        u2 = np.einsum("ij,ij->i", B2 - A1, d1) / n1**2
    lo, hi = np.minimum(u1, u2), np.maximum(u1, u2)
    return (off <= 1e-12 * (1 + n1)) & (np.minimum(hi, 1) - np.maximum(lo, 0) > 1e-9)


def _intersect_orientation(A1, B1, A2, B2):
    """Oracle kernel based on the four orientation determinants."""
    o1 = _cross(B1 - A1, A2 - A1)
    o2 = _cross(B1 - A1, B2 - A1)
    o3 = _cross(B2 - A2, A1 - A2)
    o4 = _cross(B2 - A2, B1 - A2)
    collinear = (o1 == 0) & (o2 == 0)
    hit = (o1 * o2 <= 0) & (o3 * o4 <= 0) & ~collinear & (o3 != o4) & (o1 != o2)
    with np.errstate(divide="ignore", invalid="ignore"):
        lam = np.where(hit, o3 / (o3 - o4), np.nan)
        mu = np.where(hit, o1 / (o1 - o2), np.nan)
    n1 = np.linalg.norm(B1 - A1, axis=1)
    overlap = collinear & _collinear_overlap(A1, B1 - A1, A2, B2, n1)
    return hit, overlap, lam, mu


def _raw_crossings(pa: _Polyline, pb: _Polyline | None, method: str):
    """Crossing candidates as arrays ``(seg_a, seg_b, lam, mu, overlap_flag)``."""
    same = pb is None
    if same:
        A, B = pa.A, pa.B
        m = pa.m
        label = np.zeros(m, dtype=int)
    else:
        A, B = np.vstack([pa.A, pb.A]), np.vstack([pa.B, pb.B])
        m = A.shape[0]
        label = np.r_[np.zeros(pa.m, int), np.ones(pb.m, int)]
    if method == "hash":
        pairs = _hash_pairs(A, B)
        kernel = _intersect_parametric
    elif method == "brute":
        pairs = _brute_pairs(A, B)
        kernel = _intersect_orientation
    else:
        raise ContractViolation(f"unknown method {method!r}")
    if same:
        adjacent = pairs[:, 1] == pairs[:, 0] + 1
        if pa.wraps():
            adjacent |= (pairs[:, 0] == 0) & (pairs[:, 1] == m - 1)
        pairs = pairs[~adjacent]
    else:
        pairs = pairs[label[pairs[:, 0]] != label[pairs[:, 1]]]
        # put the segment of curve a first
        pairs = np.sort(pairs, axis=1)
    out = {"i": [], "j": [], "lam": [], "mu": [], "overlap": []}
    chunk = 2_000_000
    for start in range(0, pairs.shape[0], chunk):
        pr = pairs[start : start + chunk]
        i, j = pr[:, 0], pr[:, 1]
        hit, overlap, lam, mu = kernel(A[i], B[i], A[j], B[j])
        keep = hit | overlap
        out["i"].append(i[keep])
        out["j"].append(j[keep] if same else j[keep] - pa.m)
        out["lam"].append(lam[keep])
        out["mu"].append(mu[keep])
        out["overlap"].append(overlap[keep])
    res = {k: (np.concatenate(v) if v else np.zeros(0)) for k, v in out.items()}
    res["endpoint"] = np.zeros(res["i"].size, dtype=bool)
    ends = _endpoint_contacts(pa, pb)
    for k in res:
        res[k] = np.concatenate([res[k], ends[k]])
    return res


def _touching(point, A, B):
    """Segments of ``A -> B`` passing within ``TAU_XY`` of ``point``; returns (index, lam)."""
    d = B - A
    n2 = np.einsum("ij,ij->i", d, d)
    with np.errstate(divide="ignore", invalid="ignore"):
        lam = np.clip(np.einsum("ij,ij->i", point - A, d) / n2, 0.0, 1.0)
    lam = np.where(n2 > 0, lam, 0.0)
    dist = np.linalg.norm(A + lam[:, None] * d - point, axis=1)
    scale = 1.0 + float(np.max(np.abs(point)))
    idx = np.flatnonzero(dist <= TAU_XY * scale)
    return idx, lam[idx]


def _endpoint_contacts(pa: _Polyline, pb: _Polyline | None):
    """Open-curve endpoints lying on another branch.

    A transverse-crossing test cannot see these (the endpoint may miss the
    other branch by a rounding error), yet the vertical segment joining the
    two points is a genuine Reeb chord.
    """
    out = {"i": [], "j": [], "lam": [], "mu": [], "overlap": [], "endpoint": []}

    def add(i, j, lam, mu):
        out["i"].append(np.atleast_1d(i))
        out["j"].append(np.atleast_1d(j))
        out["lam"].append(np.atleast_1d(lam).astype(float))
        out["mu"].append(np.atleast_1d(mu).astype(float))
        out["overlap"].append(np.zeros(np.size(j), dtype=bool))
        out["endpoint"].append(np.ones(np.size(j), dtype=bool))

    if pb is None:
        if not pa.closed and pa.m >= 3:
            for seg, lam_e in ((0, 0.0), (pa.m - 1, 1.0)):
                idx, mu = _touching(pa.P[-1] if lam_e else pa.P[0], pa.A, pa.B)
                far = np.abs(idx - seg) > 1
                add(np.full(far.sum(), seg), idx[far], np.full(far.sum(), lam_e), mu[far])
    else:
        for poly, other, first in ((pa, pb, True), (pb, pa, False)):
            if poly.closed:
                continue
            for seg, lam_e in ((0, 0.0), (poly.m - 1, 1.0)):
                idx, mu = _touching(poly.P[-1] if lam_e else poly.P[0], other.A, other.B)
                fixed = np.full(idx.size, seg)
                if first:
                    add(fixed, idx, np.full(idx.size, lam_e), mu)
                else:
                    add(idx, fixed, mu, np.full(idx.size, lam_e))
    return {k: (np.concatenate(v) if v else np.zeros(0, dtype=bool if k in ("overlap", "endpoint") else float))
            for k, v in out.items()}


# -- refinement and assembly -----------------------------------------------------


def _newton(ca: Curve, cb: Curve, s, t, lo_s, hi_s, lo_t, hi_t, iters=30):
    s, t = s.copy(), t.copy()
    for _ in range(iters):
        F = ca(s)[:, :2] - cb(t)[:, :2]
        if np.all(np.abs(F) <= 1e-13):
            break
        da, db = ca.derivative(s)[:, :2], cb.derivative(t)[:, :2]
        det = _cross(da, -db)
        ok = np.abs(det) > 1e-300
        det = np.where(ok, det, 1.0)
        # solve [da, -db] [ds, dt]^T = -F
        ds = -(F[:, 0] * (-db[:, 1]) - F[:, 1] * (-db[:, 0])) / det
        dt = -(da[:, 0] * F[:, 1] - da[:, 1] * F[:, 0]) / det
        s = np.clip(s + np.where(ok, ds, 0), lo_s, hi_s)
        t = np.clip(t + np.where(ok, dt, 0), lo_t, hi_t)
    F = ca(s)[:, :2] - cb(t)[:, :2]
    return s, t, np.linalg.norm(F, axis=1)


def _assemble(ca, cb, pa, pb, raw, tau_param, same):
    i, j = raw["i"].astype(int), raw["j"].astype(int)
    lam, mu = raw["lam"], raw["mu"]
    overlap = raw["overlap"].astype(bool)
    endpoint = raw["endpoint"].astype(bool)
    pb = pa if pb is None else pb
    s = pa.t[i] + lam * (pa.t[i + 1] - pa.t[i])
    t = pb.t[j] + mu * (pb.t[j + 1] - pb.t[j])
    point = pa.A[i] + lam[:, None] * (pa.B[i] - pa.A[i])
    seg_a = pa.B[i] - pa.A[i]
    seg_b = pb.B[j] - pb.A[j]
    polyline_z = ca is None or isinstance(ca, SampledCurve)
    if polyline_z:
        za = None if pa.z is None else pa.z[i] + lam * (pa.z[i + 1] - pa.z[i])
        zb = None if pb.z is None else pb.z[j] + mu * (pb.z[j + 1] - pb.z[j])
        residual = np.zeros(s.size)
        ta, tb = seg_a, seg_b
    else:
        s_ref, t_ref, residual = _newton(
            ca, cb, s, t, pa.t[i] - (pa.t[i + 1] - pa.t[i]), pa.t[i + 1] + (pa.t[i + 1] - pa.t[i]),
            pb.t[j] - (pb.t[j + 1] - pb.t[j]), pb.t[j + 1] + (pb.t[j + 1] - pb.t[j]),
        ) if s.size else (s, t, np.zeros(0))
        good = (residual <= TAU_XY) & ~endpoint
        s, t = np.where(good, s_ref, s), np.where(good, t_ref, t)
        good |= endpoint
        Pa = ca(s) if s.size else np.zeros((0, ca.dim))
        Pb = cb(t) if t.size else np.zeros((0, cb.dim))
        point = np.where(good[:, None], Pa[:, :2], point)
        za, zb = Pa[:, -1] if ca.dim == 3 else None, Pb[:, -1] if cb.dim == 3 else None
        ta = ca.derivative(s)[:, :2] if s.size else seg_a
        tb = cb.derivative(t)[:, :2] if t.size else seg_b
        overlap = overlap | ~good
    with np.errstate(divide="ignore", invalid="ignore"):
        sin = np.abs(_cross(ta, tb)) / (np.linalg.norm(ta, axis=1) * np.linalg.norm(tb, axis=1))
    suspect = overlap | (~(sin >= TANGENCY_TOL) & ~endpoint)
    # on closed curves the end of the domain is the start
    if pa.wraps():
        s = np.where(s >= pa.t[-1] - tau_param, s - (pa.t[-1] - pa.t[0]), s)
    if pb.wraps():
        t = np.where(t >= pb.t[-1] - tau_param, t - (pb.t[-1] - pb.t[0]), t)
    if same:
        swap = s > t
        s, t = np.where(swap, t, s), np.where(swap, s, t)
        if za is not None:
            za, zb = np.where(swap, zb, za), np.where(swap, za, zb)
        keep = np.abs(t - s) > tau_param
        if pa.wraps():
            period = pa.t[-1] - pa.t[0]
            keep &= np.abs(np.abs(t - s) - period) > tau_param
        s, t, point, suspect = s[keep], t[keep], point[keep], suspect[keep]
        if za is not None:
            za, zb = za[keep], zb[keep]
    length = np.zeros(s.size) if za is None else zb - za
    order = np.lexsort((t, s))
    chords, suspects = [], []
    for k in order:
        rec = ReebChord(float(s[k]), float(t[k]), (float(point[k, 0]), float(point[k, 1])), float(length[k]))
        target = suspects if suspect[k] else chords
        if not _duplicate(target, rec, tau_param):
            target.append(rec)
    return ChordReport(tuple(chords), tuple(suspects))


def _duplicate(kept, rec, tau):
    for other in reversed(kept):
        if rec.s - other.s > tau:
            return False
        if abs(rec.t - other.t) <= tau:
            return True
    return False


def _check_vertical_arcs(poly: _Polyline, tau_param):
    seg = np.linalg.norm(poly.B - poly.A, axis=1)
    dt = np.diff(poly.t)
    scale = 1.0 + float(np.max(np.abs(poly.P)))
    bad = (seg <= 1e-14 * scale) & (dt > tau_param)
    if np.any(bad):
        k = int(np.flatnonzero(bad)[0])
        raise DegenerateInputError(
            f"projection is stationary on [{poly.t[k]:.6g}, {poly.t[k + 1]:.6g}]: "
            "the curve contains a Reeb arc and its chords form a continuum"
        )


def find_self_chords(c, *, method: str = "hash") -> ChordReport:
    """All Reeb chords from the curve ``c`` to itself."""
    c = unwrap(c)
    if c.dim != 3:
        raise ContractViolation("chord detection is implemented for n = 1")
    poly = _polyline(c)
    tau = TAU_PARAM_REL * c.length
    _check_vertical_arcs(poly, tau)
    raw = _raw_crossings(poly, None, method)
    return _assemble(c, c, poly, None, raw, tau, same=True)


def find_chords_between(a, b, *, method: str = "hash") -> ChordReport:
    """Reeb chords joining ``a`` to ``b`` (delegates to self-chords when ``a is b``)."""
    a, b = unwrap(a), unwrap(b)
    if a is b:
        return find_self_chords(a, method=method)
    if a.dim != 3 or b.dim != 3:
        raise ContractViolation("chord detection is implemented for n = 1")
    pa, pb = _polyline(a), _polyline(b)
    tau = TAU_PARAM_REL * max(a.length, b.length)
    _check_vertical_arcs(pa, tau)
    _check_vertical_arcs(pb, tau)
    raw = _raw_crossings(pa, pb, method)
    if np.any(raw["overlap"]):
        raise DegenerateInputError("planar traces overlap along a segment; chords form a continuum")
    ca = None if isinstance(a, SampledCurve) or isinstance(b, SampledCurve) else a
    return _assemble(ca, b, pa, pb, raw, tau, same=False)


def planar_self_crossings(curve, closed: bool = False, *, method: str = "hash") -> list[tuple[float, float]]:
    """Parameter pairs of transverse self-crossings of a planar polyline or curve."""
    if isinstance(curve, np.ndarray):
        poly = _polyline(curve, closed)
        ca = None
    else:
        curve = unwrap(curve)
        poly = _polyline(curve)
        ca = None
    tau = TAU_PARAM_REL * (poly.t[-1] - poly.t[0])
    raw = _raw_crossings(poly, None, method)
    report = _assemble(ca, ca, poly, None, raw, tau, same=True)
    return [(ch.s, ch.t) for ch in report.chords]


def find_self_chords_planar(curve) -> list[tuple[float, float]]:
    return planar_self_crossings(curve)


# -- experiments -----------------------------------------------------------------


def action_defect_C(c) -> float:
    """One tenth of ``|z_c(t1) - z~(t1)|`` where ``z~`` lifts ``pi c`` from ``z_c(t0)``."""
    c = unwrap(c)
    proj = lagrangian_projection(c)
    t0, t1 = c.domain
    lift = legendrian_lift(proj, float(c(t0)[2]))
    report = find_self_chords(lift)
    if report.count or report.suspects:
        raise DegenerateInputError("projection is not embedded; restrict to a sub-interval first")
    return abs(float(c(t1)[2]) - float(lift(t1)[2])) / 10.0


@dataclass(frozen=True)
class ObstructionRow:
    epsilon: float
    c0_dist: float
    chord_count: int
    min_len: float
    total_len: float
    C: float
    loops: int
    construction: str

    @property
    def obstructed(self) -> bool:
        return self.chord_count >= 1

    @property
    def accounting_ok(self) -> bool:
        """Total chord length within 10% of ``10 C = |total defect|``."""
        target = 10 * self.C
        return target > 0 and abs(self.total_len - target) <= 0.1 * target

    def as_row(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "c0_dist": self.c0_dist,
            "chord_count": self.chord_count,
            "min_len": self.min_len,
            "total_len": self.total_len,
            "C": self.C,
            "loops": self.loops,
            "construction": self.construction,
            "obstructed": int(self.obstructed),
            "accounting_ok": int(self.accounting_ok),
        }


def _reeb_segment(c: Curve):
    """``(base, z0, gain)`` if the projection of ``c`` is a single point, else None."""
    _, P = c.polyline()
    if np.max(np.ptp(P[:, :2], axis=0)) > 1e-12 * (1 + np.max(np.abs(P))):
        return None
    return (float(P[0, 0]), float(P[0, 1])), float(P[0, 2]), float(P[-1, 2] - P[0, 2])


def obstruction_experiment(c, epsilons) -> list[ObstructionRow]:
    """Approximate ``c`` at each ``eps`` and record the chords that appear.

    Curves whose projection is a point (Reeb segments) are approximated by
    the chord-free spiral; everything else by the wiggle construction.
    """
    c = unwrap(c)
    epsilons = [float(e) for e in epsilons]
    if not epsilons:
        raise ContractViolation("need at least one epsilon")
    seg = _reeb_segment(c)
    rows = []
    if seg is not None:
        base, z0, gain = seg
        for eps in epsilons:
            leg = spiral_approximation(gain, base, eps, z0=z0)
            rep = find_self_chords(leg)
            rows.append(
                ObstructionRow(eps, c0_distance(leg.curve, c), rep.count, rep.min_length,
                               rep.total_length, 0.0, 0, "spiral")
            )
        return rows
    C = action_defect_C(c) if legendrian_defect(c).sup_defect > 0 else 0.0
    for eps in epsilons:
        w = wiggle_approximation(c, eps)
        rep = find_self_chords(w.curve)
        rows.append(
            ObstructionRow(eps, c0_distance(w.curve, c), rep.count, rep.min_length,
                           rep.total_length, C, w.loops, "wiggle")
        )
    return rows


def neighbourhood_contains(c, p, kappa: float) -> bool:
    """Whether ``p`` lies in the closed ``kappa``-neighbourhood of the polyline of ``c``.

    ``p`` may be a point of the ambient space or of the projection plane; in
    the latter case the projected polyline is used.
    """
    if kappa < 0:
        raise ContractViolation("kappa must be non-negative")
    c = unwrap(c)
    _, P = c.polyline()
    p = np.asarray(p, float)
    if p.shape[-1] == c.dim - 1:
        P = P[:, :-1]
    elif p.shape[-1] != c.dim:
        raise ContractViolation("point dimension does not match the curve")
    return point_polyline_distance(P, p) <= kappa
