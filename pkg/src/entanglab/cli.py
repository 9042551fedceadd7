"""Command-line interface.

Experiment subcommands (scan-threshold, spectral, concentration, gue-approx,
monotonicity, run) write an RFC-4180 CSV plus a JSON metadata sidecar that
records the seed, config digest and versions needed to reproduce the file.
Query subcommands (sample, gauge, geometry, estimate-s0) print JSON unless
directed to a file. ENTANGLAB_SEED overrides configured seeds and
ENTANGLAB_THREADS caps worker threads.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys

import numpy as np

from .config import ConfigError, ExperimentConfig
from .ensembles import EnsembleSpec, draw_ensemble, sample_gue0
from .experiments import execute_config, run_config
from .geometry import (
    density_comparison_ratio,
    gamma_m,
    log_weyl_chamber_znorm,
    log_znorm,
    separable_volume_bounds,
    vrad_states,
)
from .io import read_matrix_records, write_csv, write_matrix_records
from .linalg import ProductDims, hermitian_eigenvalues, hermitize, traceless_part
from .rng import SeededStream, trial_generators
from .separability import (
    gauge_ppt,
    gauge_separable,
    gauge_separable_sym,
    gauge_states,
)
from .stats import from_samples
from .widths import (
    ppt_threshold_estimate,
    separability_threshold_estimate,
    symmetrization_volume_ratio,
    width_duality_check,
)

__all__ = ["main"]


def _as_plain(obj):
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {k: _as_plain(v) for k, v in dataclasses.asdict(obj).items()}
    if isinstance(obj, dict):
        return {k: _as_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_as_plain(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    return obj


def _emit(payload: dict, out: str | None) -> None:
    text = json.dumps(_as_plain(payload), indent=2, sort_keys=True)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _parse_dims(text: str) -> tuple[int, ...]:
    try:
        dims = tuple(int(p) for p in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad dims {text!r}; expected e.g. 2,2")
    if len(dims) < 2:
        raise argparse.ArgumentTypeError("dims needs at least two factors")
    return dims


def _parse_s_values(text: str):
    if ":" in text:
        parts = text.split(":")
        if len(parts) not in (2, 3):
            raise argparse.ArgumentTypeError("range must be start:stop[:step]")
        start, stop = int(parts[0]), int(parts[1])
        step = int(parts[2]) if len(parts) == 3 else 1
        return {"start": start, "stop": stop, "step": step}
    return [int(p) for p in text.split(",")]


def _run_experiment_dict(raw: dict, out: str) -> int:
    try:
        config = ExperimentConfig.from_dict(raw)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    return execute_config(config, output_override=out)


# -- subcommand handlers ------------------------------------------------------


def _cmd_sample(args) -> int:
    spec = EnsembleSpec(args.ensemble, args.n, args.s)
    stream = SeededStream(args.seed)
    draws = [draw_ensemble(spec, rng) for rng in trial_generators(stream, args.trials)]
    if args.format == "bin":
        mats = [d.matrix if hasattr(d, "matrix") else d for d in draws]
        write_matrix_records(args.out, mats)
        return 0
    if spec.kind == "ginibre":
        print("ginibre draws are not self-adjoint; use --format bin", file=sys.stderr)
        return 2
    rows = []
    for t, d in enumerate(draws):
        mat = d.matrix if hasattr(d, "matrix") else d
        for i, lam in enumerate(hermitian_eigenvalues(mat)):
            rows.append((t, i, lam))
    write_csv(args.out, ["trial", "index", "value"], rows)
    return 0


def _cmd_spectral(args) -> int:
    raw = {
        "experiment": "spectral",
        "ensemble": args.ensemble,
        "n": args.n,
        "trials": args.trials,
        "master_seed": args.seed,
    }
    if args.ensemble == "induced":
        raw["s"] = args.s
    return _run_experiment_dict(raw, args.out)


def _cmd_gauge(args) -> int:
    mats = read_matrix_records(args.input)
    if not mats:
        print("no matrix records in input", file=sys.stderr)
        return 2
    A = hermitize(mats[0])
    trace = float(np.trace(A).real)
    A = traceless_part(A)
    dims = ProductDims(args.dims)
    if A.shape[0] != dims.n:
        print(f"matrix is {A.shape[0]}x{A.shape[0]} but dims give n={dims.n}", file=sys.stderr)
        return 2
    if args.body == "d0":
        value, width, evals = gauge_states(A), 0.0, 0
    elif args.body == "ppt0":
        value, width, evals = gauge_ppt(A, dims), 0.0, 0
    elif args.body == "s0":
        res = gauge_separable(A, dims, tol=args.tol)
        value, width, evals = res.value, res.bracket_width, res.membership_evals
    else:  # ssym
        res = gauge_separable_sym(A, dims, tol=args.tol)
        value, width, evals = res.value, res.bracket_width, res.membership_evals
    _emit(
        {
            "body": args.body,
            "dims": list(dims.factors),
            "value": value,
            "bracket_width": width,
            "evals": evals,
            "trace_removed": trace,
        },
        args.out,
    )
    return 0


def _cmd_geometry(args) -> int:
    check = args.check
    seed = args.seed
    payload: dict = {"check": check, "seed": seed}
    if check == "zvol":
        s = args.s if args.s is not None else args.n
        payload.update(
            n=args.n, s=s,
            log_znorm=log_znorm(args.n, s),
            log_weyl_chamber_znorm=log_weyl_chamber_znorm(args.n, s),
        )
    elif check == "vrad":
        v = vrad_states(args.n)
        payload.update(
            n=args.n, vrad=v,
            normalized=v * args.n ** 0.5 * np.exp(0.25),
        )
    elif check == "comparison":
        svals = [args.s] if args.s is not None else [args.n * f for f in (1, 2, 4, 8)]
        payload.update(
            n=args.n,
            ratios={str(s): density_comparison_ratio(args.n, s) for s in svals},
        )
    elif check == "duality":
        res = width_duality_check(ProductDims((2, 2)), args.trials, SeededStream(seed))
        payload.update(_as_plain(res))
        payload["passed"] = res.passed
    elif check == "urysohn":
        n = args.n
        vals = [
            float(np.linalg.eigvalsh(sample_gue0(n, rng))[-1])
            for rng in trial_generators(SeededStream(seed), args.trials)
        ]
        est = from_samples(vals)
        gm = gamma_m(n * n - 1)
        width = est.mean / gm
        v = vrad_states(n)
        payload.update(
            n=n, trials=args.trials, vrad=v, width=width,
            width_stderr=est.stderr / gm,
            passed=bool(v <= width + 3 * est.stderr / gm),
        )
    elif check == "rogers-shephard":
        res = symmetrization_volume_ratio(args.m, args.points, SeededStream(seed))
        payload.update(_as_plain(res))
        payload["passed"] = res.passed
    elif check == "sep-bounds":
        b1, b2, beta = separable_volume_bounds(args.k, args.d)
        payload.update(k=args.k, d=args.d, bound_i=b1, bound_ii=b2, beta_d=beta)
    elif check == "s0":
        est = separability_threshold_estimate(2, args.trials, SeededStream(seed))
        payload.update(d=2, trials=args.trials, value=est.mean, stderr=est.stderr)
    else:  # s0-ppt
        res = ppt_threshold_estimate(args.d, args.trials, SeededStream(seed))
        payload.update(_as_plain(res))
    _emit(payload, args.out)
    return 0


def _cmd_scan_threshold(args) -> int:
    raw = {
        "experiment": "threshold-scan",
        "dims": list(args.dims),
        "s_values": _parse_s_values(args.s_values),
        "criterion": args.criterion,
        "trials": args.trials,
        "master_seed": args.seed,
    }
    return _run_experiment_dict(raw, args.out)


def _cmd_estimate_s0(args) -> int:
    if args.ppt:
        res = ppt_threshold_estimate(args.d, args.trials, SeededStream(args.seed))
        payload = _as_plain(res)
        payload.update(kind="ppt", trials=args.trials, seed=args.seed)
    else:
        est = separability_threshold_estimate(args.d, args.trials, SeededStream(args.seed))
        payload = {
            "kind": "separable",
            "d": args.d,
            "trials": args.trials,
            "seed": args.seed,
            "value": est.mean,
            "stderr": est.stderr,
        }
    _emit(payload, args.out)
    return 0


def _cmd_gue_approx(args) -> int:
    raw = {
        "experiment": "gue-approx",
        "n": args.n,
        "s": args.s,
        "body": args.body,
        "trials": args.trials,
        "master_seed": args.seed,
    }
    return _run_experiment_dict(raw, args.out)


def _cmd_concentration(args) -> int:
    raw = {
        "experiment": "concentration",
        "d": args.d,
        "s": args.s,
        "body": args.body,
        "trials": args.trials,
        "master_seed": args.seed,
    }
    return _run_experiment_dict(raw, args.out)


def _cmd_monotonicity(args) -> int:
    raw = {
        "experiment": "monotonicity",
        "mode": args.mode,
        "s": args.s,
        "trials": args.trials,
        "master_seed": args.seed,
    }
    if args.mode == "projection":
        raw["d1"], raw["d2"] = args.d1, args.d2
    else:
        raw["d"] = args.d
    return _run_experiment_dict(raw, args.out)


def _cmd_run(args) -> int:
    return run_config(args.config, output_override=args.out)


# -- parser -------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entanglab",
        description="Monte-Carlo laboratory for random induced quantum states.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, trials_default=1000):
        p.add_argument("--trials", type=int, default=trials_default)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default=None)

    p = sub.add_parser("sample", help="draw from an ensemble and serialize")
    p.add_argument("--ensemble", required=True,
                   choices=["gue", "gue0", "ginibre", "induced", "uniform"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--s", type=int, default=None)
    p.add_argument("--format", choices=["csv", "bin"], default="csv")
    add_common(p, trials_default=1)
    p.set_defaults(fn=_cmd_sample)

    p = sub.add_parser("spectral", help="per-trial spectral statistics CSV")
    p.add_argument("--ensemble", required=True, choices=["gue0", "induced"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--s", type=int, default=None)
    add_common(p, trials_default=20)
    p.set_defaults(fn=_cmd_spectral)

    p = sub.add_parser("gauge", help="gauge of a direction read from a matrix dump")
    p.add_argument("--input", required=True)
    p.add_argument("--body", required=True, choices=["s0", "ssym", "d0", "ppt0"])
    p.add_argument("--dims", type=_parse_dims, required=True)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_gauge)

    p = sub.add_parser("geometry", help="exact and Monte-Carlo geometry checks")
    p.add_argument("--check", required=True,
                   choices=["zvol", "vrad", "comparison", "duality", "urysohn",
                            "rogers-shephard", "sep-bounds", "s0", "s0-ppt"])
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--s", type=int, default=None)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--points", type=int, default=20000)
    add_common(p)
    p.set_defaults(fn=_cmd_geometry)

    p = sub.add_parser("scan-threshold", help="criterion probability over s values")
    p.add_argument("--dims", type=_parse_dims, required=True)
    p.add_argument("--criterion", required=True, choices=["exact", "ppt"])
    p.add_argument("--s-values", required=True,
                   help="comma list (2,4,8) or range start:stop[:step]")
    add_common(p)
    p.set_defaults(fn=_cmd_scan_threshold)

    p = sub.add_parser("estimate-s0", help="threshold estimate from the Gaussian mean gauge")
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--ppt", action="store_true", help="use the PPT body (any d)")
    add_common(p, trials_default=2000)
    p.set_defaults(fn=_cmd_estimate_s0)

    p = sub.add_parser("gue-approx", help="GUE approximation ratio R(n, s)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--body", required=True, choices=["d0", "ppt0", "hs", "s0"])
    add_common(p, trials_default=200)
    p.set_defaults(fn=_cmd_gue_approx)

    p = sub.add_parser("concentration", help="gauge spread at s versus 4s")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--body", default="s0", choices=["s0", "d0", "ppt0"])
    add_common(p)
    p.set_defaults(fn=_cmd_concentration)

    p = sub.add_parser("monotonicity", help="coupled monotonicity comparison")
    p.add_argument("--mode", required=True, choices=["projection", "partial-trace"])
    p.add_argument("--d1", type=int, default=2)
    p.add_argument("--d2", type=int, default=3)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--s", type=int, required=True)
    add_common(p)
    p.set_defaults(fn=_cmd_monotonicity)

    p = sub.add_parser("run", help="execute a JSON experiment config")
    p.add_argument("config")
    p.add_argument("--out", default=None, help="override the config's output path")
    p.set_defaults(fn=_cmd_run)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    needs_out = args.command in (
        "sample", "spectral", "scan-threshold", "gue-approx", "concentration", "monotonicity"
    )
    if needs_out and not args.out:
        print(f"{args.command} requires --out", file=sys.stderr)
        return 2
    if args.command == "sample" and args.ensemble in ("ginibre", "induced") and args.s is None:
        print(f"ensemble {args.ensemble} requires --s", file=sys.stderr)
        return 2
    if args.command == "spectral" and args.ensemble == "induced" and args.s is None:
        print("induced ensemble requires --s", file=sys.stderr)
        return 2
    try:
        return args.fn(args)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
