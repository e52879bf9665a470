"""Command-line interface.

    mvgrowth simulate  --seed 7 --out demo
    mvgrowth depth     --ref demo_ref.csv [--patient demo_patient.csv]
    mvgrowth profile   --ref demo_ref.csv --patient demo_patient.csv
    mvgrowth direction --ref demo_ref.csv --patient demo_patient.csv --angles 500
    mvgrowth region    --ref demo_ref.csv --p-level 0.5
    mvgrowth chart     --ref demo_ref.csv --patient demo_patient.csv --chart projected --out demo

Results go to stdout as a JSON envelope; charts and simulated data go to
files named from ``--out``.  Exit status: 0 success, 2 input error,
1 internal error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence, TextIO

from . import __version__
from .chartkit import coordinate_boxplots, projected_boxplots, scatter_extremes, trajectory_panels
from .data import ReferenceSeries, Trajectory, align
from .depth import DEFAULT_APPROX_DIRS, depth_counts, depth_of, resolve_method
from .direction import DirectionFit, UnitDirection, optimize_grid_2d, optimize_sphere
from .errors import GrowthChartError
from .io import (
    ResultEnvelope,
    digest,
    format_patient_csv,
    format_reference_csv,
    parse_patient_csv,
    parse_reference_csv,
    read_text,
)
from .quantiles import classify_extremes, depth_region, profile
from .synthetic import GenSpec, gen_patient, gen_reference

EXIT_OK, EXIT_INTERNAL, EXIT_INPUT = 0, 1, 2
CHARTS = ("extremes", "trajectory", "projected", "coordinates")


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse default also exits 2; keep usage on stderr
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return value


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mvgrowth", description="Depth-based multivariate growth charts.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def depth_opts(p):
        p.add_argument("--method", choices=("auto", "exact", "approx"), default="auto")
        p.add_argument("--dirs", type=_positive_int, default=DEFAULT_APPROX_DIRS, help="random directions for approximate depth")
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("depth", help="half-space depths")
    p.add_argument("--ref", required=True)
    p.add_argument("--patient")
    depth_opts(p)

    p = sub.add_parser("profile", help="multivariate quantile profile of a patient")
    p.add_argument("--ref", required=True)
    p.add_argument("--patient", required=True)
    depth_opts(p)

    p = sub.add_parser("direction", help="patient-specific projection direction")
    p.add_argument("--ref", required=True)
    p.add_argument("--patient", required=True)
    p.add_argument("--angles", type=_positive_int, default=500, help="grid size on [0, pi) for p = 2")
    p.add_argument("--search", choices=("auto", "grid", "sphere"), default="auto")
    depth_opts(p)

    p = sub.add_parser("region", help="depth region holding a given share of each sample")
    p.add_argument("--ref", required=True)
    p.add_argument("--p-level", type=float, required=True)
    depth_opts(p)

    p = sub.add_parser("chart", help="write SVG charts")
    p.add_argument("--ref", required=True)
    p.add_argument("--patient")
    p.add_argument("--chart", choices=CHARTS, required=True)
    p.add_argument("--out", required=True, help="output file prefix")
    p.add_argument("--low", type=float, default=0.05)
    p.add_argument("--high", type=float, default=0.95)
    p.add_argument("--angles", type=_positive_int, default=500)
    p.add_argument("--direction", help="comma-separated projection vector (default: fitted)")
    depth_opts(p)

    p = sub.add_parser("simulate", help="write synthetic reference and patient CSVs")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output file prefix")
    p.add_argument("--k", type=_positive_int, default=4)
    p.add_argument("--n", type=_positive_int, default=1000)
    return parser


class _Context:
    """Input digests and whether the random seed influenced the result."""

    def __init__(self) -> None:
        self.inputs: dict[str, str] = {}
        self.seed_used = False


def _load_refs(path: str, ctx: _Context) -> ReferenceSeries:
    text, raw = read_text(path)
    ctx.inputs["ref"] = digest(raw)
    return parse_reference_csv(text)


def _load_patient(path: str, ctx: _Context) -> Trajectory:
    text, raw = read_text(path)
    ctx.inputs["patient"] = digest(raw)
    return parse_patient_csv(text)


def _method(args, p: int, ctx: _Context) -> str:
    method = resolve_method(p, args.method)
    ctx.seed_used |= method == "approx"
    return method


def _depth_json(d) -> dict:
    return {"count": d.count, "n": d.n, "value": d.value}


def _fit_json(fit: DirectionFit) -> dict:
    out = {
        "direction": list(fit.direction.coords),
        "objective": fit.objective,
        "q": list(fit.q),
        "q_tilde": list(fit.q_tilde),
        "grid_index": fit.grid_index,
    }
    if fit.direction.p == 2:
        out["angle"] = fit.direction.angle
    return out


def _fit(args, refs: ReferenceSeries, traj: Trajectory, ctx: _Context) -> tuple[DirectionFit, dict]:
    search = getattr(args, "search", "auto")
    if search == "auto":
        search = "grid" if refs.p == 2 else "sphere"
    prof = profile(traj, refs, _method(args, refs.p, ctx), args.dirs, args.seed)
    if search == "grid":
        return optimize_grid_2d(traj, refs, prof, n_angles=args.angles), {"search": "grid", "n_angles": args.angles}
    ctx.seed_used = True
    fit = optimize_sphere(traj, refs, prof, n_dirs=args.dirs, seed=args.seed)
    return fit, {"search": "sphere", "n_dirs": args.dirs}


def _cmd_depth(args, ctx):
    refs = _load_refs(args.ref, ctx)
    method = _method(args, refs.p, ctx)
    results = []
    if args.patient:
        traj = _load_patient(args.patient, ctx)
        for t, x, ref in align(traj, refs):
            results.append({"time": t, **_depth_json(depth_of(x, ref, method, args.dirs, args.seed))})
        return {"mode": "patient", "method": method, "results": results}
    for t, s in refs:
        counts = depth_counts(s, method, args.dirs, args.seed)
        results.append({"time": t, "n": int(s.shape[0]), "counts": [int(c) for c in counts]})
    return {"mode": "reference", "method": method, "results": results}


def _cmd_profile(args, ctx):
    refs = _load_refs(args.ref, ctx)
    traj = _load_patient(args.patient, ctx)
    method = _method(args, refs.p, ctx)
    prof = profile(traj, refs, method, args.dirs, args.seed)
    return {
        "method": method,
        "times": list(prof.times),
        "q": list(prof.q),
        "depths": [_depth_json(d) for d in prof.depths],
    }


def _cmd_direction(args, ctx):
    refs = _load_refs(args.ref, ctx)
    traj = _load_patient(args.patient, ctx)
    fit, meta = _fit(args, refs, traj, ctx)
    return {"times": list(traj.times), **_fit_json(fit), **meta}


def _cmd_region(args, ctx):
    refs = _load_refs(args.ref, ctx)
    method = _method(args, refs.p, ctx)
    regions = []
    for t, s in refs:
        reg = depth_region(s, args.p_level, method, args.dirs, args.seed)
        regions.append(
            {
                "time": t,
                "gamma": reg.gamma,
                "gamma_count": reg.gamma_count,
                "coverage": reg.coverage,
                "member_indices": list(reg.member_indices),
            }
        )
    return {"p_level": args.p_level, "regions": regions}


def _cmd_chart(args, ctx):
    refs = _load_refs(args.ref, ctx)
    traj = _load_patient(args.patient, ctx) if args.patient else None
    if traj is None and args.chart != "extremes":
        raise GrowthChartError(f"--chart {args.chart} needs --patient")
    files, extra = [], {}
    if args.chart == "extremes":
        method = _method(args, refs.p, ctx)
        for i, (t, s) in enumerate(refs, start=1):
            labels = classify_extremes(s, args.low, args.high, method, args.dirs, args.seed)
            doc = scatter_extremes(s, labels, title=f"t = {t:g}")
            files.append(str(doc.save(f"{args.out}_extremes_{i}.svg")))
    elif args.chart == "trajectory":
        doc = trajectory_panels(refs, traj)
        files.append(str(doc.save(f"{args.out}_trajectory.svg")))
    elif args.chart == "projected":
        if args.direction:
            try:
                vec = [float(v) for v in args.direction.split(",")]
            except ValueError:
                raise GrowthChartError(f"--direction must be comma-separated numbers, got {args.direction!r}") from None
            direction = UnitDirection.from_vector(vec)
        else:
            fit, meta = _fit(args, refs, traj, ctx)
            direction = fit.direction
            extra = {"fit": {**_fit_json(fit), **meta}}
        doc = projected_boxplots(refs, traj, direction)
        files.append(str(doc.save(f"{args.out}_projected.svg")))
        extra["direction"] = list(direction.coords)
    else:
        doc = coordinate_boxplots(refs, traj)
        files.append(str(doc.save(f"{args.out}_coordinates.svg")))
    return {"chart": args.chart, "files": files, **extra}


def _cmd_simulate(args, ctx):
    ctx.seed_used = True
    spec = GenSpec(k=args.k, n=args.n, seed=args.seed)
    refs, traj = gen_reference(spec), gen_patient(spec)
    ref_path, pat_path = Path(f"{args.out}_ref.csv"), Path(f"{args.out}_patient.csv")
    ref_path.write_text(format_reference_csv(refs), encoding="utf-8", newline="\n")
    pat_path.write_text(format_patient_csv(traj), encoding="utf-8", newline="\n")
    return {
        "files": {"ref": str(ref_path), "patient": str(pat_path)},
        "generator": {
            "k": spec.k,
            "n": spec.n,
            "mean_start": list(spec.mean_start),
            "mean_end": list(spec.mean_end),
            "variances": list(spec.variances),
            "correlation": spec.correlation,
            "patient_drift": list(spec.patient_drift),
        },
    }


_COMMANDS = {
    "depth": _cmd_depth,
    "profile": _cmd_profile,
    "direction": _cmd_direction,
    "region": _cmd_region,
    "chart": _cmd_chart,
    "simulate": _cmd_simulate,
}


def run(argv: Sequence[str] | None = None, stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr
    parser = _build_parser()
    old_err = sys.stderr
    sys.stderr = stderr
    try:
        try:
            args = parser.parse_args(argv)
        except SystemExit as exc:
            return int(exc.code or 0)
    finally:
        sys.stderr = old_err

    ctx = _Context()
    try:
        payload = _COMMANDS[args.command](args, ctx)
    except (GrowthChartError, OSError) as exc:
        print(f"mvgrowth {args.command}: error: {exc}", file=stderr)
        return EXIT_INPUT
    except Exception as exc:  # noqa: BLE001
        print(f"mvgrowth {args.command}: internal error: {exc!r}", file=stderr)
        return EXIT_INTERNAL
    env = ResultEnvelope(args.command, payload, ctx.inputs, __version__, args.seed if ctx.seed_used else None)
    stdout.write(env.to_json())
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
