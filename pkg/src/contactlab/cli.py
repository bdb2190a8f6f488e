"""Command-line experiment runner.

Every subcommand writes its tables (CSV, 17 significant digits), curve files
(JSON), figures (PNG) and a ``manifest.json`` with content hashes into the
``--out`` directory.  Settings can also come from a ``key = value`` file
given with ``--config``; explicit flags override it.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .catalog import CURVES, named_curve
from .chords import find_chords_between, find_self_chords, obstruction_experiment
from .constructions import (
    SuspensionMap,
    legendrian_lift,
    spiral_approximation,
    suspension_pullback_norm,
    wiggle_approximation,
)
from .curves import c0_distance, circle_curve, lagrangian_projection, legendrian_defect, line_curve, unwrap
from .errors import ContactLabError, ContractViolation
from .flows import displacement_experiment, flow, hamiltonian, hofer_osc_norm, tangency_margin
from .io import read_curve, write_csv, write_curve, write_manifest
from . import plotting

EXPERIMENTS = ("lift", "spiral", "wiggle", "chords", "obstruction", "suspension", "flow", "displace", "norms")


def float_list(text: str) -> list[float]:
    try:
        vals = [float(v) for v in str(text).replace(";", ",").split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma separated list of numbers: {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("list must not be empty")
    return vals


def int_list(text: str) -> list[int]:
    vals = float_list(text)
    if any(v != int(v) for v in vals):
        raise argparse.ArgumentTypeError(f"expected integers: {text!r}")
    return [int(v) for v in vals]


def point(text: str) -> np.ndarray:
    return np.array(float_list(text))


class Run:
    """Collects artifacts for the manifest."""

    def __init__(self, args):
        self.args = args
        self.out = Path(args.out)
        self.out.mkdir(parents=True, exist_ok=True)
        self.files: list[Path] = []

    def csv(self, name, rows, columns=None):
        self.files.append(write_csv(self.out / name, rows, columns))

    def curve(self, name, curve, provenance=None):
        self.files.append(write_curve(self.out / name, curve, provenance))

    def figure(self, fn, name, *a, **kw):
        if not self.args.no_plots:
            self.files.append(fn(*a, path=self.out / name, **kw))

    def finish(self):
        config = {k: v for k, v in vars(self.args).items() if k != "func"}
        write_manifest(self.out, self.files, config, __version__, self.args.seed)


def load_curve(source: str, seed: int):
    """A catalog name or a path to a curve JSON file."""
    if source in CURVES:
        return named_curve(source, seed)
    path = Path(source)
    if path.suffix == ".json" or path.exists():
        return read_curve(path)
    raise ContractViolation(f"{source!r} is neither a known curve ({', '.join(sorted(CURVES))}) nor a file")


def _planar(curve):
    c = unwrap(curve)
    return c if c.dim == 2 else lagrangian_projection(c)


# -- experiments ------------------------------------------------------------------


def cmd_lift(run: Run):
    a = run.args
    p = _planar(load_curve(a.curve, a.seed))
    leg = legendrian_lift(p, a.z0)
    t, P = leg.curve.polyline()
    run.curve("lift.json", leg, leg.provenance)
    run.csv("lift.csv", [{"t": ti, "x": x, "y": y, "z": z} for ti, (x, y, z) in zip(t, P)])
    run.csv("lift_summary.csv", [{"z_start": P[0, 2], "z_end": P[-1, 2], "sup_defect": leg.sup_defect,
                                  "tolerance": leg.tol}])
    run.figure(plotting.plot_curve, "lift.png", leg, title="Legendrian lift")


def cmd_spiral(run: Run):
    a = run.args
    base = a.base if a.base is not None else np.zeros(2)
    leg = spiral_approximation(a.z_gain, tuple(base), a.eps, z0=a.z0)
    interval = line_curve([base[0], base[1], a.z0], [0.0, 0.0, a.z_gain])
    rep = find_self_chords(leg)
    brute = find_self_chords(leg, method="brute")
    _, P = leg.curve.polyline()
    run.curve("spiral.json", leg, leg.provenance)
    run.csv("spiral.csv", [{
        "epsilon": a.eps, "z_gain": P[-1, 2] - P[0, 2], "turns": leg.provenance["turns"],
        "c0_dist": c0_distance(leg.curve, interval), "chord_count": rep.count,
        "chord_count_brute": brute.count, "sup_defect": leg.sup_defect,
    }])
    run.figure(plotting.plot_curve, "spiral.png", leg, title=f"spiral, eps={a.eps:g}")


def cmd_wiggle(run: Run):
    a = run.args
    c = load_curve(a.curve, a.seed)
    w = wiggle_approximation(c, a.eps)
    rep = find_self_chords(w.curve)
    run.curve("wiggle.json", w.legendrian, w.legendrian.provenance)
    run.csv("wiggle.csv", [{
        "epsilon": a.eps, "loops": w.loops, "c0_dist": c0_distance(w.curve, c),
        "chord_count": rep.count, "min_len": rep.min_length, "total_len": rep.total_length,
        "loop_action_sum": float(np.sum(np.abs(w.loop_actions))),
        "total_defect": legendrian_defect(c).total_defect,
    }])
    run.csv("wiggle_loops.csv", [{"loop": k, "action": act, "radius": r}
                                 for k, (act, r) in enumerate(zip(w.loop_actions, w.loop_radii))])
    run.figure(plotting.plot_curve, "wiggle.png", w.curve, title=f"wiggle, eps={a.eps:g}", chords=rep)


def cmd_chords(run: Run):
    a = run.args
    c = load_curve(a.curve, a.seed)
    if a.other:
        rep = find_chords_between(c, load_curve(a.other, a.seed), method=a.method)
    else:
        rep = find_self_chords(c, method=a.method)
    rows = [dict(kind="chord", s=ch.s, t=ch.t, x=ch.planar_point[0], y=ch.planar_point[1],
                 signed_length=ch.signed_length, length=ch.length) for ch in rep.chords]
    rows += [dict(kind="suspect", s=ch.s, t=ch.t, x=ch.planar_point[0], y=ch.planar_point[1],
                  signed_length=ch.signed_length, length=ch.length) for ch in rep.suspects]
    run.csv("chords.csv", rows, ["kind", "s", "t", "x", "y", "signed_length", "length"])
    run.csv("chords_summary.csv", [{"chord_count": rep.count, "suspects": len(rep.suspects),
                                    "min_len": rep.min_length, "max_len": rep.max_length,
                                    "total_len": rep.total_length}])
    run.figure(plotting.plot_curve, "chords.png", c, title="Reeb chords", chords=rep)


OBSTRUCTION_COLUMNS = ["epsilon", "c0_dist", "chord_count", "min_len", "total_len", "C",
                       "loops", "construction", "obstructed", "accounting_ok"]


def cmd_obstruction(run: Run):
    a = run.args
    c = load_curve(a.curve, a.seed)
    rows = [r.as_row() for r in obstruction_experiment(c, a.eps)]
    run.csv("obstruction.csv", rows, OBSTRUCTION_COLUMNS)
    run.figure(plotting.plot_obstruction, "obstruction.png", rows)


def cmd_suspension(run: Run):
    a = run.args
    lo, hi = a.s_range
    if a.loop_radius * 2 > a.eps + 1e-15:
        raise ContractViolation("loop of this radius does not fit in [0, eps]")
    loop = circle_curve(a.loop_radius, center=(a.eps / 2, (lo + hi) / 2), samples=256)
    base = load_curve(a.curve, a.seed)
    m = SuspensionMap(base, loop, (lo, hi))
    norm = suspension_pullback_norm(m, a.resolution)
    run.csv("suspension.csv", [{"curve": a.curve, "epsilon": a.eps, "loop_radius": a.loop_radius,
                                "s_lo": lo, "s_hi": hi, "resolution": a.resolution,
                                "sup_defect": legendrian_defect(base).sup_defect, "pullback_norm": norm}])


def cmd_flow(run: Run):
    a = run.args
    H = hamiltonian(a.hamiltonian)
    H.validate(seed=a.seed)
    if a.curve:
        target = load_curve(a.curve, a.seed)
    else:
        target = np.atleast_2d(a.point if a.point is not None else np.array([1.0, 0.0, 0.0]))
    res = flow(H, target, a.time, steps_per_unit=a.steps, tol=a.tol)
    src = np.atleast_2d(res.source)
    img = np.atleast_2d(res.points)
    rows = []
    for k in range(src.shape[0]):
        row = {"t": a.time}
        row.update({f"{v}0": src[k, i] for i, v in enumerate("xyz")})
        row.update({v: img[k, i] for i, v in enumerate("xyz")})
        row.update({"residual": res.conformal_residual[k], "g": res.conformal_factor[k]})
        rows.append(row)
    run.csv("flow.csv", rows)
    run.csv("flow_summary.csv", [{"t": a.time, "steps": res.steps, "error_estimate": res.error_estimate,
                                  "max_residual": res.max_residual}])
    if res.curve is not None:
        run.curve("flow.json", res.curve, {"hamiltonian": H.name, "time": a.time})
        run.figure(plotting.plot_traces, "flow.png", target, [res.curve], [f"t={a.time:g}"],
                   title=f"flow of {H.name}")


def cmd_displace(run: Run):
    a = run.args
    H = hamiltonian(a.hamiltonian)
    H.validate(seed=a.seed)
    L = load_curve(a.curve, a.seed)
    rep = displacement_experiment(H, L, a.times, steps_per_unit=a.steps, tol=a.tol)
    rows = [r.as_row() for r in rep.rows]
    run.csv("displace.csv", rows, ["t", "chord_count", "crossings", "min_len", "min_distance",
                                   "disjoint", "margin", "status"])
    run.csv("displace_summary.csv", [{"hamiltonian": H.name, "first_disjoint_time":
                                      "" if rep.first_disjoint_time is None else rep.first_disjoint_time,
                                      "margin": tangency_margin(H, L) if rows else ""}])
    ok = [t for t, r in zip(a.times, rep.rows) if r.status == "ok"]
    if ok:
        images = [flow(H, L, t, steps_per_unit=a.steps, tol=a.tol, residuals=False).curve for t in ok]
        run.figure(plotting.plot_traces, "displace.png", L, images, [f"t={t:g}" for t in ok],
                   title=f"displacement by {H.name}")


def cmd_norms(run: Run):
    a = run.args
    H = hamiltonian(a.hamiltonian)
    box = np.asarray(a.box, float)
    if box.size == 2:
        box = np.tile(box, (H.dim, 1))
    elif box.size == 2 * H.dim:
        box = box.reshape(H.dim, 2)
    else:
        raise ContractViolation(f"--box needs 2 or {2 * H.dim} numbers")
    reports = [hofer_osc_norm(H, box, r, a.time_samples) for r in a.resolution]
    rows = [r.as_row() for r in reports]
    run.csv("norms.csv", rows, ["resolution", "time_samples", "osc_norm", "positive_norm", "min_integral",
                                "error_bar"])
    run.figure(plotting.plot_series, "norms.png", [r.resolution for r in reports],
               {"osc": [r.osc_norm for r in reports], "positive": [r.positive_norm for r in reports]},
               xlabel="grid points per axis", title=f"norms of {H.name}")


COMMANDS = {
    "lift": cmd_lift,
    "spiral": cmd_spiral,
    "wiggle": cmd_wiggle,
    "chords": cmd_chords,
    "obstruction": cmd_obstruction,
    "suspension": cmd_suspension,
    "flow": cmd_flow,
    "displace": cmd_displace,
    "norms": cmd_norms,
}


# -- parser -----------------------------------------------------------------------

GLOBAL_DEFAULTS = {"out": "contactlab-out", "seed": 0, "steps": 10_000, "tol": 1e-6}


def _add_globals(p, suppress: bool):
    d = (lambda k: argparse.SUPPRESS) if suppress else GLOBAL_DEFAULTS.get
    p.add_argument("--out", default=d("out"), help="output directory")
    p.add_argument("--seed", type=int, default=d("seed"), help="seed for random curves and checks")
    p.add_argument("--steps", type=int, default=d("steps"), help="RK4 steps per unit time")
    p.add_argument("--tol", type=float, default=d("tol"), help="RK4 Richardson error tolerance")
    p.add_argument("--config", default=d("config"), help="key = value settings file (flags win)")
    p.add_argument("--no-plots", action="store_true", default=d("no_plots") or False,
                   help="skip PNG figures")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="contactlab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _add_globals(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _add_globals(common, suppress=True)
    sub = parser.add_subparsers(dest="command", metavar="EXPERIMENT", required=True)

    def add(name, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(func=COMMANDS[name])
        return p

    p = add("lift", "Legendrian lift of a planar curve")
    p.add_argument("--curve", default="unit-circle")
    p.add_argument("--z0", type=float, default=0.0)

    p = add("spiral", "chord-free spiral approximating a Reeb segment")
    p.add_argument("--z-gain", type=float, default=1.0)
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--base", type=point, default=None, help="x0,y0")
    p.add_argument("--z0", type=float, default=0.0)

    p = add("wiggle", "loop-inserting Legendrian approximation")
    p.add_argument("--curve", default="diagonal")
    p.add_argument("--eps", type=float, default=0.1)

    p = add("chords", "Reeb chords of one curve or between two")
    p.add_argument("--curve", default="figure-eight")
    p.add_argument("--other", default=None)
    p.add_argument("--method", choices=("hash", "brute"), default="hash")

    p = add("obstruction", "chords of wiggle approximants over an epsilon sweep")
    p.add_argument("--curve", default="diagonal")
    p.add_argument("--eps", type=float_list, default=[0.2, 0.1, 0.05])

    p = add("suspension", "Lagrangian test of the suspension cylinder")
    p.add_argument("--curve", default="circle-lift")
    p.add_argument("--eps", type=float, default=0.4)
    p.add_argument("--loop-radius", type=float, default=0.2)
    p.add_argument("--s-range", type=float_list, default=[-1.0, 1.0])
    p.add_argument("--resolution", type=int, default=64)

    p = add("flow", "flow points or a curve by a contact Hamiltonian")
    p.add_argument("--hamiltonian", default="radial", help="reeb, radial, coordinate-x or an expression")
    p.add_argument("--point", type=point, default=None, help="x,y,z")
    p.add_argument("--curve", default=None)
    p.add_argument("--time", type=float, default=0.5)

    p = add("displace", "chords between a curve and its flowed images")
    p.add_argument("--hamiltonian", default="radial")
    p.add_argument("--curve", default="unit-circle-3d")
    p.add_argument("--times", type=float_list, default=[0.1, 0.2, 0.3, 0.4, 0.5])

    p = add("norms", "oscillation and positive norms on a box")
    p.add_argument("--hamiltonian", default="radial")
    p.add_argument("--box", type=float_list, default=[-1.0, 1.0])
    p.add_argument("--resolution", type=int_list, default=[32, 64, 128])
    p.add_argument("--time-samples", type=int, default=64)
    return parser


def read_config(path) -> dict[str, str]:
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def _apply_config(parser, argv, args):
    try:
        conf = read_config(args.config)
    except (OSError, ValueError) as exc:
        parser.error(f"cannot read config: {exc}")
    sub = parser._subparsers._group_actions[0].choices[args.command]
    sub_dests = {a.dest for a in sub._actions}
    main_dests = {a.dest for a in parser._actions}
    main_conf, sub_conf = {}, {}
    for key, value in conf.items():
        if key in ("config", "command", "func", "help"):
            parser.error(f"config key {key!r} is not allowed")
        if key == "no_plots":
            main_conf[key] = value.lower() in ("1", "true", "yes", "on")
        elif key in GLOBAL_DEFAULTS or key in main_dests:
            main_conf[key] = value
        elif key in sub_dests:
            sub_conf[key] = value
        else:
            parser.error(f"unknown config key {key!r} for {args.command}")
    parser.set_defaults(**main_conf)
    sub.set_defaults(**sub_conf)
    return parser.parse_args(argv)


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        args = _apply_config(parser, argv, args)
    if args.steps < 2:
        parser.error("--steps must be at least 2")
    if not args.tol > 0:
        parser.error("--tol must be positive")
    run = Run(args)
    try:
        args.func(run)
    except ContactLabError as exc:
        print(f"contactlab {args.command}: error: {exc}", file=sys.stderr)
        return 1
    run.finish()
    print(f"{args.command}: wrote {len(run.files)} files to {run.out}")
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
