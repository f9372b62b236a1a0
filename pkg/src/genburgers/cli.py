"""Command-line front end.

Subcommands::

    genburgers evaluate --evaluator inviscid --spec box.json --t 2 --x -2:2:0.01 --out u.csv
    genburgers compare a.csv b.csv [--out gap.json]
    genburgers sweep --evaluator inviscid --spec box.json --times 100,1000,10000 --out decay.csv
    genburgers oracle --spec box.json --nu 0.1 --t 1 --x -20:20:0.01 --out fd.csv [--history-every 100]
    genburgers report [--only 1,3] [--out report.json] [--strict]

Grids are ``min:max:step`` and include ``max`` when it lies within half a
step of the last point.  Every CSV gets a ``<name>.json`` sidecar holding the
run manifest.  Exit codes: 0 success, 1 runtime error, 2 usage error.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .field import FieldSlice, format_number, read_slice_csv, write_text_atomic
from .inviscid import DEFAULT_TIE_TOL
from .model import SpecError, load_spec
from .oracle import FDConfig, solve_fd
from .studies import EVALUATORS, UsageError, compare_slices, evaluate_field, parse_grid, run_sweep

EXIT_OK, EXIT_RUNTIME, EXIT_USAGE = 0, 1, 2


@dataclass
class RunManifest:
    command: str
    spec_path: str | None = None
    evaluator: str | None = None
    grid: str | None = None
    nu: float | None = None
    t: float | list[float] | None = None
    outputs: list[str] = field(default_factory=list)
    options: dict = field(default_factory=dict)
    tool_version: str = __version__
    timestamp: str = field(
        default_factory=lambda: _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
    )


def _dump_json(path, data) -> None:
    write_text_atomic(path, json.dumps(data, indent=2, sort_keys=True) + "\n")


def _sidecar(path: Path) -> Path:
    return path.with_name(path.name + ".json")


def _write_slice(sl: FieldSlice, out: str | None, manifest: RunManifest) -> None:
    if out is None:
        sys.stdout.write(sl.to_csv())
        return
    manifest.outputs = [out, str(_sidecar(Path(out)))]
    sl.write(out, asdict(manifest))


def _parse_times(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"times must be a comma-separated list of numbers, got {text!r}") from None


def cmd_evaluate(args) -> int:
    spec = load_spec(args.spec)
    xs = parse_grid(args.x)
    sl = evaluate_field(spec, args.evaluator, xs, args.t, args.nu,
                        side=args.side, tie_tol=args.tie_tol, rel_tol=args.rel_tol)
    manifest = RunManifest("evaluate", args.spec, args.evaluator, args.x, args.nu, args.t,
                           options={"side": args.side, "tie_tol": args.tie_tol, "rel_tol": args.rel_tol})
    _write_slice(sl, args.out, manifest)
    return EXIT_OK


def cmd_compare(args) -> int:
    a, b = read_slice_csv(args.a), read_slice_csv(args.b)
    try:
        report = compare_slices(a, b)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    report["files"] = [args.a, args.b]
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if args.out:
        write_text_atomic(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_sweep(args) -> int:
    spec = load_spec(args.spec)
    times = _parse_times(args.times)
    xs = parse_grid(args.x) if args.x else None
    res = run_sweep(spec, args.evaluator, times, args.nu, xs=xs, dx=args.dx, threshold=args.threshold)
    manifest = RunManifest("sweep", args.spec, args.evaluator, args.x or f"auto, step {args.dx}",
                           args.nu, times, options={"threshold": args.threshold})
    summary = res.summary()
    if args.out is None:
        sys.stdout.write(res.to_csv())
        sys.stdout.write(json.dumps(summary, indent=2, sort_keys=True) + "\n")
        return EXIT_OK
    out = Path(args.out)
    manifest.outputs = [str(out), str(_sidecar(out))]
    write_text_atomic(out, res.to_csv())
    _dump_json(_sidecar(out), {**summary, "manifest": asdict(manifest)})
    return EXIT_OK


def _write_history(history: list[FieldSlice], path: Path) -> None:
    n = history[0].n
    lines = [",".join(["t", "x"] + [f"u{j + 1}" for j in range(n)])]
    for sl in history:
        tt = format_number(sl.t)
        for i in range(sl.x.size):
            lines.append(",".join([tt, format_number(sl.x[i])] + [format_number(v) for v in sl.u[i]]))
    write_text_atomic(path, "\n".join(lines) + "\n")


def cmd_oracle(args) -> int:
    spec = load_spec(args.spec)
    xs = parse_grid(args.x)
    if xs.size < 3:
        raise UsageError("the oracle needs at least 3 grid points")
    cfg = FDConfig(float(xs[0]), float(xs[-1]), xs.size, args.t, cfl_safety=args.cfl, nt=args.nt)
    manifest = RunManifest("oracle", args.spec, "fd", args.x, args.nu, args.t,
                           options={"cfl_safety": args.cfl, "nt": args.nt, "history_every": args.history_every})
    if args.history_every:
        if args.out is None:
            raise UsageError("--history-every needs --out")
        final, history = solve_fd(spec, args.nu, cfg, history_every=args.history_every)
        hist_path = Path(args.out).with_suffix(".history.csv")
        _write_history(history, hist_path)
        manifest.options["history"] = str(hist_path)
    else:
        final = solve_fd(spec, args.nu, cfg)
    _write_slice(final, args.out, manifest)
    return EXIT_OK


def cmd_report(args) -> int:
    from .validation import CHECKS, run_check

    keys = [k.strip() for k in args.only.split(",")] if args.only else list(CHECKS)
    unknown = [k for k in keys if k not in CHECKS]
    if unknown:
        raise UsageError(f"unknown check(s) {unknown}; have {', '.join(CHECKS)}")
    results = []
    for k in keys:
        res = run_check(k)
        print(f"{res.line()}  ({res.seconds:.1f}s)", flush=True)
        results.append(res)
    passed = sum(r.passed for r in results)
    print(f"{passed}/{len(results)} checks passed")
    if args.out:
        manifest = RunManifest("report", outputs=[args.out], options={"only": keys})
        _dump_json(args.out, {"results": [r.to_dict() for r in results], "manifest": asdict(manifest)})
    return EXIT_RUNTIME if args.strict and passed < len(results) else EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="genburgers", description="Exact and reference solvers for the generalized Burgers system.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    ev = sub.add_parser("evaluate", help="sample one evaluator on a grid")
    ev.add_argument("--evaluator", required=True, choices=EVALUATORS)
    ev.add_argument("--spec", required=True, help="problem spec JSON")
    ev.add_argument("--t", required=True, type=float)
    ev.add_argument("--x", required=True, help="grid min:max:step")
    ev.add_argument("--nu", type=float, help="viscosity (viscous, profile, fd; optional for box)")
    ev.add_argument("--side", default="auto", choices=("auto", "left", "right"),
                    help="minimizer used at shock points (inviscid)")
    ev.add_argument("--tie-tol", type=float, default=DEFAULT_TIE_TOL)
    ev.add_argument("--rel-tol", type=float, default=1e-9)
    ev.add_argument("--out", help="CSV path (stdout when omitted)")
    ev.set_defaults(func=cmd_evaluate)

    cm = sub.add_parser("compare", help="gap norms between two slices on the same grid")
    cm.add_argument("a")
    cm.add_argument("b")
    cm.add_argument("--out", help="JSON path (stdout when omitted)")
    cm.set_defaults(func=cmd_compare)

    sw = sub.add_parser("sweep", help="sup norms, support edges and power-law fits over a list of times")
    sw.add_argument("--evaluator", required=True, choices=EVALUATORS)
    sw.add_argument("--spec", required=True)
    sw.add_argument("--times", required=True, help="comma-separated increasing times")
    sw.add_argument("--nu", type=float)
    sw.add_argument("--x", help="fixed grid min:max:step (default: per-time support window)")
    sw.add_argument("--dx", type=float, default=1e-2, help="step of the automatic grid")
    sw.add_argument("--threshold", type=float, help="zero threshold for support edges")
    sw.add_argument("--out", help="CSV path; the fits go to <out>.json")
    sw.set_defaults(func=cmd_sweep)

    orc = sub.add_parser("oracle", help="finite-difference reference run")
    orc.add_argument("--spec", required=True)
    orc.add_argument("--nu", required=True, type=float)
    orc.add_argument("--t", required=True, type=float)
    orc.add_argument("--x", required=True, help="uniform grid min:max:step")
    orc.add_argument("--cfl", type=float, default=0.9)
    orc.add_argument("--nt", type=int, help="fixed number of time steps")
    orc.add_argument("--history-every", type=int, help="also write every k-th step to <out>.history.csv")
    orc.add_argument("--out")
    orc.set_defaults(func=cmd_oracle)

    rp = sub.add_parser("report", help="run the numerical checks and summarize them")
    rp.add_argument("--only", help="comma-separated check keys")
    rp.add_argument("--out", help="JSON report path")
    rp.add_argument("--strict", action="store_true", help="exit 1 when a check fails")
    rp.set_defaults(func=cmd_report)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, SpecError) as exc:
        print(f"genburgers {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, ValueError, RuntimeError, ArithmeticError) as exc:
        print(f"genburgers {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
