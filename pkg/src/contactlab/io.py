"""Curve JSON files, CSV tables and run manifests."""

from __future__ import annotations

import csv
import hashlib
import json
import math
from pathlib import Path

import numpy as np

from .curves import SampledCurve, unwrap
from .errors import ContractViolation

CSV_DIGITS = 17


def curve_to_dict(curve, provenance: dict | None = None, t=None) -> dict:
    """Schema ``{"n", "closed", "samples": [[t, x.., y.., z], ..]}`` plus provenance."""
    c = unwrap(curve)
    if t is None:
        t, P = c.polyline()
    else:
        t = np.asarray(t, float)
        P = c(t)
    rows = np.column_stack([t, P])
    out = {"n": int(c.n), "closed": bool(c.closed), "samples": rows.tolist()}
    prov = provenance if provenance is not None else getattr(curve, "provenance", None)
    if prov:
        out["provenance"] = _jsonable(prov)
    return out


def curve_from_dict(data: dict) -> SampledCurve:
    """Validate a decoded curve document and build a :class:`SampledCurve`.

    Rows may carry the full ``2n + 1`` coordinates or only the planar
    ``2n`` (a Lagrangian projection).
    """
    if not isinstance(data, dict):
        raise ContractViolation("curve document must be a JSON object")
    missing = {"n", "closed", "samples"} - set(data)
    if missing:
        raise ContractViolation(f"curve document lacks keys {sorted(missing)}")
    n, closed = data["n"], data["closed"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ContractViolation("'n' must be a positive integer")
    if not isinstance(closed, bool):
        raise ContractViolation("'closed' must be a boolean")
    try:
        rows = np.asarray(data["samples"], dtype=float)
    except (TypeError, ValueError) as exc:
        raise ContractViolation(f"samples are not a numeric table: {exc}") from None
    if rows.ndim != 2 or rows.shape[1] not in (2 * n + 1, 2 * n + 2):
        raise ContractViolation(f"each sample must be [t, x.., y.., z] or [t, x.., y..] for n={n}")
    return SampledCurve(rows[:, 0], rows[:, 1:], closed=closed)


def write_curve(path, curve, provenance: dict | None = None) -> Path:
    path = Path(path)
    path.write_text(json.dumps(curve_to_dict(curve, provenance), indent=1) + "\n")
    return path


def read_curve(path) -> SampledCurve:
    path = Path(path)
    if not path.is_file():
        raise ContractViolation(f"curve file {path} does not exist")
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ContractViolation(f"{path}: invalid JSON ({exc})") from None
    return curve_from_dict(data)


def format_value(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return format(v, f".{CSV_DIGITS}g")
    return str(v)


def write_csv(path, rows: list[dict], columns: list[str] | None = None) -> Path:
    """Write ``rows`` with a fixed column order; floats get 17 significant digits."""
    path = Path(path)
    if columns is None:
        columns = list(rows[0]) if rows else []
        for r in rows[1:]:
            columns += [k for k in r if k not in columns]
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([format_value(r.get(k, "")) for k in columns])
    return path


def read_csv(path) -> list[dict]:
    with Path(path).open(newline="") as fh:
        return list(csv.DictReader(fh))


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else str(v)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, Path):
        return str(obj)
    if obj is None or isinstance(obj, (str, int, bool)):
        return obj
    return repr(obj)


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with Path(path).open("rb") as fh:
        for block in iter(lambda: fh.read(1 << 16), b""):
            h.update(block)
    return h.hexdigest()


def write_manifest(outdir, files, config: dict, version: str, seed: int) -> Path:
    """List every artifact with its size and SHA-256 next to the run settings."""
    outdir = Path(outdir)
    entries = []
    for f in sorted(set(Path(f) for f in files)):
        entries.append({"path": f.name if f.parent == outdir else str(f.relative_to(outdir)),
                        "sha256": sha256_file(f), "bytes": f.stat().st_size})
    doc = {"version": version, "seed": int(seed), "config": _jsonable(config), "files": entries}
    path = outdir / "manifest.json"
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return path
