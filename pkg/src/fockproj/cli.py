"""Command-line interface: norms, sweeps, verification suites, plot data.

Every data file is deterministic for a fixed flag set: the run id is a
hash of the resolved parameters, CSV output carries no timestamps (those
live in the manifest sidecar), and JSON embeds the manifest as a separate
object next to the rows.  Sweep rows are computed on a small worker pool
with per-row deterministic inputs and written single-threaded in sorted
order.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from datetime import datetime, timezone

import numpy as np
from scipy.optimize._linesearch import LineSearchWarning

from . import __version__
from .errors import CounterexampleError, FockprojError
from .objective import objective_coords
from .operator import OperatorConfig
from .optimize import (
    compute_norm_report,
    sharp_norm,
    sharp_norm_factor,
    tensorized_norm,
)
from .suites import SUITE_NAMES, run_suite

SCHEMA_LINE = "# schema=1"


def _format_float(x) -> str:
    return f"{float(x):.17g}"


def _dump_json(obj, indent: int = 0) -> str:
    """Serialize with floats at 17 significant digits, keys in given order."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [
            f"{inner}{json.dumps(str(k))}: {_dump_json(v, indent + 1)}" for k, v in obj.items()
        ]
        return "{\n" + ",\n".join(items) + f"\n{pad}}}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [f"{inner}{_dump_json(v, indent + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + f"\n{pad}]"
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _format_float(obj)
    return json.dumps(str(obj))


@dataclass(frozen=True)
class RunManifest:
    command: str
    parameters: dict
    seed: int
    version: str
    run_id: str
    started: str
    finished: str
    outputs: tuple

    def as_dict(self) -> dict:
        return {
            "command": self.command,
            "parameters": self.parameters,
            "seed": self.seed,
            "version": self.version,
            "run_id": self.run_id,
            "started": self.started,
            "finished": self.finished,
            "outputs": list(self.outputs),
        }


def _run_id(command: str, parameters: dict) -> str:
    # destination and encoding do not affect the data, so they stay out of
    # the id: identical data flags give identical bytes at any path
    data_params = {k: v for k, v in sorted(parameters.items()) if k not in ("out", "format")}
    canonical = _dump_json({"command": command, "parameters": data_params})
    return hashlib.sha256(canonical.encode()).hexdigest()[:12]


def _utc_now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _cell(value) -> str:
    if isinstance(value, (float, np.floating)):
        return _format_float(value)
    return str(value)


def _write_report(out: str, fmt: str, columns, rows, command: str, parameters: dict, started: str):
    """Write rows + manifest; returns the list of files written."""
    run_id = _run_id(command, parameters)
    if fmt == "csv":
        lines = [SCHEMA_LINE, f"# run_id={run_id}", ",".join(columns)]
        lines += [",".join(_cell(row[c]) for c in columns) for row in rows]
        manifest = RunManifest(
            command=command,
            parameters=parameters,
            seed=int(parameters.get("seed", 0)),
            version=__version__,
            run_id=run_id,
            started=started,
            finished=_utc_now(),
            outputs=(out,),
        )
        sidecar = out + ".manifest.json"
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
        with open(sidecar, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(_dump_json(manifest.as_dict()) + "\n")
        return [out, sidecar]
    manifest = RunManifest(
        command=command,
        parameters=parameters,
        seed=int(parameters.get("seed", 0)),
        version=__version__,
        run_id=run_id,
        started=started,
        finished=_utc_now(),
        outputs=(out,),
    )
    payload = {
        "manifest": manifest.as_dict(),
        "rows": [{c: row[c] for c in columns} for row in rows],
    }
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(_dump_json(payload) + "\n")
    return [out]


def _matrix_coords(matrix) -> tuple:
    if matrix is None:
        return (float("nan"),) * 6
    arr = matrix.array
    return (
        float(arr[0, 0].real),
        float(arr[1, 1].real),
        float(arr[0, 1].real),
        float(arr[0, 0].imag),
        float(arr[1, 1].imag),
        float(arr[0, 1].imag),
    )


def cmd_norm(args) -> int:
    started = _utc_now()
    cfg = OperatorConfig(n=args.n, alpha=args.alpha, p=args.p)
    report = compute_norm_report(cfg, seed=args.seed, sample_budget=min(args.budget, 20_000))
    gap = abs(report.optimized_norm - report.closed_form_norm) / report.closed_form_norm
    print(f"p = {args.p:g}, n = {args.n}, alpha = {args.alpha:g}")
    print(f"closed-form norm        = {_format_float(report.closed_form_norm)}")
    print(f"optimizer-confirmed norm = {_format_float(report.optimized_norm)}")
    print(f"abs rel gap             = {_format_float(gap)}")
    if report.maximizer is None:
        print("maximizer: none (p = 1 supremum is approached, not attained)")
    else:
        a, d, b, e, g, f = _matrix_coords(report.maximizer)
        print("maximizer shape matrix A' (test Gaussian has matrix (alpha/2) A'):")
        print(f"  [{a:+.12f}{e:+.12f}i  {b:+.12f}{f:+.12f}i]")
        print(f"  [{b:+.12f}{f:+.12f}i  {d:+.12f}{g:+.12f}i]")
        print(f"gradient residual = {_format_float(report.gradient_residual)}")
    if report.samples_checked:
        print(
            f"sampled {report.samples_checked} admissible matrices; "
            f"max objective {_format_float(report.max_sample_value)}"
        )
    if args.out:
        a, d, b, e, g, f = _matrix_coords(report.maximizer)
        row = {
            "p": float(args.p),
            "n": int(args.n),
            "alpha": float(args.alpha),
            "closed_form_norm": report.closed_form_norm,
            "optimizer_norm": report.optimized_norm,
            "abs_rel_gap": gap,
            "gradient_residual": report.gradient_residual,
            "samples_checked": report.samples_checked,
            "maximizer_a": a,
            "maximizer_d": d,
            "maximizer_b": b,
            "maximizer_e": e,
            "maximizer_g": g,
            "maximizer_f": f,
        }
        params = {
            "p": float(args.p),
            "n": int(args.n),
            "alpha": float(args.alpha),
            "seed": int(args.seed),
            "budget": int(args.budget),
            "out": args.out,
            "format": args.format,
        }
        written = _write_report(
            args.out, args.format, list(row), [row], "norm", params, started
        )
        print("wrote " + ", ".join(written))
    return 0


def _sweep_row(p: float, n: int, seed: int) -> dict:
    closed = sharp_norm(p, n)
    optimized = tensorized_norm(p, n, seed=seed)
    return {
        "p": p,
        "p_conjugate": p / (p - 1.0),
        "j_p": sharp_norm_factor(p),
        "sharp_norm": closed,
        "critical_a": 1.0 / (p - 1.0),
        "optimizer_norm": optimized,
        "abs_rel_gap": abs(optimized - closed) / closed,
    }


def cmd_sweep(args) -> int:
    started = _utc_now()
    ps = [float(p) for p in np.linspace(args.p_min, args.p_max, args.steps)]
    # the optimizer's own catch_warnings is per-call; concurrent enter/exit
    # races on the global filter list, so hold the ignore across the pool
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", LineSearchWarning)
        warnings.simplefilter("ignore", RuntimeWarning)
        with ThreadPoolExecutor(max_workers=min(4, len(ps))) as pool:
            rows = list(pool.map(lambda p: _sweep_row(p, args.n, args.seed), ps))
    rows.sort(key=lambda row: row["p"])
    params = {
        "p_min": float(args.p_min),
        "p_max": float(args.p_max),
        "steps": int(args.steps),
        "n": int(args.n),
        "seed": int(args.seed),
        "out": args.out,
        "format": args.format,
    }
    columns = ["p", "p_conjugate", "j_p", "sharp_norm", "critical_a", "optimizer_norm", "abs_rel_gap"]
    written = _write_report(args.out, args.format, columns, rows, "sweep", params, started)
    print(f"wrote {len(rows)} rows: " + ", ".join(written))
    return 0


def cmd_verify(args) -> int:
    results = run_suite(args.suite, seed=args.seed, budget=args.budget)
    failures = [r for r in results if not r.passed]
    for r in results:
        flag = "PASS" if r.passed else "FAIL"
        line = f"[{flag}] {r.name}: residual = {r.residual:.3e}"
        if r.detail:
            line += f" ({r.detail})"
        print(line)
    print(f"{len(results) - len(failures)}/{len(results)} properties passed")
    if failures:
        for r in failures:
            print(f"replay: suite={args.suite} seed={args.seed} budget={args.budget} "
                  f"property={r.name!r} detail={r.detail!r}", file=sys.stderr)
        return 1
    return 0


def _plot_rows(kind: str, args) -> tuple[list, list]:
    if kind == "norm-vs-p":
        columns = ["p", "j_p", "sharp_norm"]
        ps = np.linspace(args.p_min, args.p_max, args.steps)
        return columns, [
            {"p": float(p), "j_p": sharp_norm_factor(p), "sharp_norm": sharp_norm(p, args.n)}
            for p in ps
        ]
    if kind == "hp-slice":
        columns = ["a", "d", "h_p"]
        axis = np.arange(1, args.steps + 1) * (2.0 / args.steps)
        rows = []
        for a in axis:
            for d in axis:
                value = objective_coords((a, d, 0.0, 0.0, 0.0, 0.0), args.p).value
                rows.append({"a": float(a), "d": float(d), "h_p": value})
        return columns, rows
    columns = ["c", "ratio"]
    cs = np.arange(1, args.steps + 1) * (5.0 / args.steps)
    rows = [
        {"c": float(c), "ratio": float(2.0 * c ** (1.0 / args.p) / (1.0 + c)) ** args.n}
        for c in cs
    ]
    return columns, rows


def cmd_plotdata(args) -> int:
    started = _utc_now()
    if args.steps is None:
        args.steps = {"norm-vs-p": 50, "hp-slice": 60, "ratio-vs-c": 100}[args.kind]
    columns, rows = _plot_rows(args.kind, args)
    params = {
        "kind": args.kind,
        "p": float(args.p),
        "p_min": float(args.p_min),
        "p_max": float(args.p_max),
        "steps": int(args.steps),
        "n": int(args.n),
        "seed": int(args.seed),
        "out": args.out,
        "format": args.format,
    }
    written = _write_report(args.out, args.format, columns, rows, "plotdata", params, started)
    print(f"wrote {len(rows)} rows: " + ", ".join(written))
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fockproj",
        description="Sharp L^p norms of the Gaussian-kernel projection: "
        "compute, sweep, verify, and tabulate.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, out_required: bool):
        sp.add_argument("--seed", type=int, default=42)
        sp.add_argument("--out", type=str, required=out_required, default=None)
        sp.add_argument("--format", choices=("csv", "json"), default="csv")

    sp = sub.add_parser("norm", help="closed-form vs optimizer-confirmed norm at one (p, n, alpha)")
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--n", type=int, default=1)
    sp.add_argument("--alpha", type=float, default=1.0)
    sp.add_argument("--budget", type=int, default=100_000)
    common(sp, out_required=False)
    sp.set_defaults(func=cmd_norm)

    sp = sub.add_parser("sweep", help="tabulate the norm across an exponent range")
    sp.add_argument("--p-min", type=float, default=1.1)
    sp.add_argument("--p-max", type=float, default=10.0)
    sp.add_argument("--steps", type=int, default=20)
    sp.add_argument("--n", type=int, default=1)
    common(sp, out_required=True)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("verify", help="run a named invariant suite")
    sp.add_argument("--suite", choices=SUITE_NAMES, default="all")
    sp.add_argument("--budget", type=int, default=100_000)
    sp.add_argument("--seed", type=int, default=42)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("plotdata", help="emit plottable curves and slices")
    sp.add_argument("--kind", choices=("norm-vs-p", "hp-slice", "ratio-vs-c"), required=True)
    sp.add_argument("--p", type=float, default=3.0)
    sp.add_argument("--p-min", type=float, default=1.1)
    sp.add_argument("--p-max", type=float, default=10.0)
    sp.add_argument("--steps", type=int, default=None)
    sp.add_argument("--n", type=int, default=1)
    common(sp, out_required=True)
    sp.set_defaults(func=cmd_plotdata)
    return parser


def _validate(parser: argparse.ArgumentParser, args) -> None:
    if getattr(args, "p", None) is not None and args.p < 1:
        parser.error(f"--p must be >= 1, got {args.p}")
    if getattr(args, "n", None) is not None and args.n < 1:
        parser.error(f"--n must be >= 1, got {args.n}")
    if getattr(args, "alpha", None) is not None and args.alpha <= 0:
        parser.error(f"--alpha must be positive, got {args.alpha}")
    if getattr(args, "budget", None) is not None and args.budget < 1:
        parser.error(f"--budget must be positive, got {args.budget}")
    if hasattr(args, "p_min"):
        if not args.p_min > 1:
            parser.error(f"--p-min must exceed 1, got {args.p_min}")
        if not args.p_min < args.p_max:
            parser.error(f"need --p-min < --p-max, got {args.p_min} >= {args.p_max}")
    if getattr(args, "steps", None) is not None and args.steps < 2:
        parser.error(f"--steps must be >= 2, got {args.steps}")


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    _validate(parser, args)
    try:
        return args.func(args)
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3
    except CounterexampleError as exc:
        print(f"property violated: {exc}", file=sys.stderr)
        if exc.witness is not None:
            print(f"witness for replay: {exc.witness!r}", file=sys.stderr)
        return 1
    except FockprojError as exc:
        print(f"failed: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
