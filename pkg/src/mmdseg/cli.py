"""Command line interface.

Subcommands: detect-u, detect-s, detect-ss, detect-forward, simulate,
oracle-curve, benchmark.  Exit codes: 0 success, 2 configuration error,
3 data error.  Results are deterministic given identical inputs and flags;
wall-clock timing goes to stderr so reports stay byte-identical.
"""

from __future__ import annotations

import argparse
import csv
import sys
import time

from .amoc import AmocConfig
from .benchmark import BenchmarkCell, run_benchmark
from .dataio import (
    dumps_json,
    format_float,
    load_csv,
    save_csv,
    truth_sidecar_path,
    write_json,
)
from .errors import ConfigurationError, DataError
from .kernel import gram_matrix, median_heuristic
from .mmd import rho_values
from .oracle import oracle_curve
from .segment import detect_forward, detect_s, detect_ss, detect_u
from .simulate import DEFAULT_GRID_SIZE, MODEL_IDS, ModelSpec, generate

_DEFAULTS = {
    "delta": 0.05,
    "permutations": 199,
    "alpha": 0.05,
    "seed": 0,
    "add_one": False,
    "bandwidth": "median",
    "format": "json",
    "workers": 1,
}

_TRUE_WORDS = {"1", "true", "yes", "on"}


def read_config_file(path) -> dict[str, str]:
    """Plain key=value lines; '#' starts a comment; flags override these."""
    out: dict[str, str] = {}
    try:
        with open(path) as fh:
            for ln, raw in enumerate(fh, start=1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ConfigurationError(
                        f"{path}: line {ln} is not key=value: {raw.strip()!r}"
                    )
                key, value = line.split("=", 1)
                out[key.strip().replace("-", "_")] = value.strip()
    except OSError as exc:
        raise ConfigurationError(f"cannot read config file {path}: {exc}") from exc
    return out


class _Options:
    """Layered option lookup: CLI flag, then config file, then default."""

    def __init__(self, args, file_cfg):
        self.args = args
        self.file_cfg = file_cfg

    def get(self, key, cast, default=None):
        flag = getattr(self.args, key, None)
        if flag is not None:
            return flag
        if key in self.file_cfg:
            raw = self.file_cfg[key]
            try:
                if cast is bool:
                    return raw.lower() in _TRUE_WORDS
                return cast(raw)
            except ValueError:
                raise ConfigurationError(f"config value {key}={raw!r} is not {cast.__name__}")
        if key in _DEFAULTS:
            return _DEFAULTS[key]
        return default


def _amoc_config(opts: _Options) -> AmocConfig:
    return AmocConfig(
        delta=opts.get("delta", float),
        R=opts.get("permutations", int),
        alpha=opts.get("alpha", float),
        seed=opts.get("seed", int),
        add_one=opts.get("add_one", bool),
    )


def _bandwidth(opts: _Options) -> float | None:
    raw = opts.get("bandwidth", str)
    if isinstance(raw, str) and raw.lower() in ("median", "auto"):
        return None
    try:
        h = float(raw)
    except ValueError:
        raise ConfigurationError(f"bandwidth must be 'median' or a number, got {raw!r}")
    if h <= 0:
        raise ConfigurationError(f"bandwidth must be positive, got {h}")
    return h


def _emit(text: str, output):
    if output is None:
        sys.stdout.write(text)
    else:
        with open(output, "w", newline="") as fh:
            fh.write(text)


def _parse_lengths(raw: str) -> tuple[int, ...]:
    try:
        lengths = tuple(int(tok) for tok in str(raw).split(",") if tok.strip())
    except ValueError:
        raise ConfigurationError(f"lengths must be comma-separated integers, got {raw!r}")
    if not lengths:
        raise ConfigurationError("lengths must not be empty")
    return lengths


def _parse_params(pairs) -> dict[str, float]:
    params: dict[str, float] = {}
    for pair in pairs or []:
        if "=" not in pair:
            raise ConfigurationError(f"--param expects name=value, got {pair!r}")
        name, value = pair.split("=", 1)
        try:
            params[name.strip()] = float(value)
        except ValueError:
            raise ConfigurationError(f"--param value {value!r} is not a number")
    return params


# ---------------------------------------------------------------------------
# detect-*
# ---------------------------------------------------------------------------


def _boundary_p_values(trace) -> dict[int, float]:
    """p-value of the rejecting test that created each boundary, when any."""
    out = {}
    for rec in trace:
        if rec.get("op") == "test" and rec.get("reject"):
            out[rec["candidate"]] = rec["p_value"]
    return out


def _cmd_detect(args) -> int:
    opts = _Options(args, read_config_file(args.config) if args.config else {})
    config = _amoc_config(opts)
    h = _bandwidth(opts)
    fmt = opts.get("format", str)
    if fmt not in ("json", "csv"):
        raise ConfigurationError(f"format must be json or csv, got {fmt!r}")
    data = load_csv(args.input)

    algo = args.algorithm
    params: dict = {}
    t0 = time.perf_counter()
    if algo == "u":
        result = detect_u(data, config, h=h)
    elif algo == "s":
        K = opts.get("changepoints", int)
        if K is None:
            raise ConfigurationError("detect-s requires -K/--changepoints")
        params["K"] = int(K)
        result = detect_s(data, int(K), config.delta, h=h)
    elif algo == "ss":
        K_u = opts.get("upper", int)
        if K_u is None:
            raise ConfigurationError("detect-ss requires --upper")
        K_l = opts.get("lower", int)
        K_l = 0 if K_l is None else int(K_l)
        params["K_l"], params["K_u"] = K_l, int(K_u)
        result = detect_ss(data, K_l, int(K_u), config, h=h)
    else:
        K_l = opts.get("lower", int)
        if K_l is None:
            raise ConfigurationError("detect-forward requires --lower")
        params["K_l"] = int(K_l)
        result = detect_forward(data, int(K_l), config, h=h)
    elapsed = time.perf_counter() - t0

    seg = result.segmentation
    by_boundary = _boundary_p_values(result.trace)
    doc = {
        "command": f"detect-{algo}",
        "n": seg.n,
        "grid_size": int(data.shape[1]),
        "config": {
            "delta": config.delta,
            "R": config.R,
            "alpha": config.alpha,
            "seed": config.seed,
            "add_one": config.add_one,
            "bandwidth": "median" if h is None else h,
            **params,
        },
        "bandwidth": result.bandwidth,
        "k_hat": seg.k,
        "boundaries": list(seg.boundaries),
        "breakfractions": list(seg.breakfractions),
        "p_values": [by_boundary.get(b) for b in seg.boundaries],
        "trace": result.trace,
    }
    if fmt == "json":
        _emit(dumps_json(doc), args.output)
    else:
        rows = ["boundary,breakfraction"]
        rows += [f"{b},{format_float(f)}" for b, f in zip(seg.boundaries, seg.breakfractions)]
        _emit("\n".join(rows) + "\n", args.output)
    print(f"elapsed_seconds={elapsed:.3f}", file=sys.stderr)
    return 0


# ---------------------------------------------------------------------------
# simulate / oracle-curve / benchmark
# ---------------------------------------------------------------------------


def _model_spec(args, opts: _Options) -> ModelSpec:
    model = opts.get("model", str)
    lengths = opts.get("lengths", str)
    if model is None or lengths is None:
        raise ConfigurationError("a model id and --lengths are required")
    return ModelSpec(
        model_id=str(model),
        segment_lengths=_parse_lengths(lengths),
        seed=opts.get("seed", int),
        grid_size=int(opts.get("grid_size", int, default=DEFAULT_GRID_SIZE)),
        params=_parse_params(getattr(args, "param", None)),
    )


def _cmd_simulate(args) -> int:
    opts = _Options(args, read_config_file(args.config) if args.config else {})
    spec = _model_spec(args, opts)
    sample = generate(spec)
    save_csv(sample.data, args.output)
    sidecar = {
        "model": spec.model_id,
        "n": spec.n,
        "grid_size": spec.grid_size,
        "seed": spec.seed,
        "params": {k: float(v) for k, v in sorted(spec.params.items())},
        "segment_lengths": list(spec.segment_lengths),
        "boundaries": list(sample.truth.boundaries),
        "breakfractions": list(sample.truth.breakfractions),
    }
    write_json(sidecar, truth_sidecar_path(args.output))
    print(f"wrote {args.output} and {truth_sidecar_path(args.output)}", file=sys.stderr)
    return 0


def _cmd_oracle_curve(args) -> int:
    opts = _Options(args, read_config_file(args.config) if args.config else {})
    if args.input is not None:
        if args.segment_lengths is None:
            raise ConfigurationError("--input requires --segment-lengths")
        data = load_csv(args.input)
        lengths = _parse_lengths(args.segment_lengths)
        if sum(lengths) != data.shape[0]:
            raise ConfigurationError(
                f"segment lengths {lengths} do not sum to n={data.shape[0]}"
            )
    else:
        spec = _model_spec(args, opts)
        data = generate(spec).data
        lengths = spec.segment_lengths
    h = _bandwidth(opts)
    if h is None:
        h = median_heuristic(data)
    gram = gram_matrix(data, h)
    star = oracle_curve(gram, lengths)
    empirical = rho_values(gram)
    lines = ["r,rho_star,rho"]
    lines += [
        f"{r},{format_float(s)},{format_float(e)}"
        for r, (s, e) in enumerate(zip(star, empirical), start=1)
    ]
    _emit("\n".join(lines) + "\n", args.output)
    return 0


def _cmd_benchmark(args) -> int:
    opts = _Options(args, read_config_file(args.config) if args.config else {})
    config = _amoc_config(opts)
    spec = _model_spec(args, opts)
    cell = BenchmarkCell(
        model=spec,
        algorithm=args.algorithm,
        config=config,
        K=args.changepoints,
        K_l=args.lower,
        K_u=args.upper,
        bandwidth=_bandwidth(opts),
        label=f"{spec.model_id}-{args.algorithm}",
    )
    t0 = time.perf_counter()
    report = run_benchmark(
        [cell],
        replications=opts.get("replications", int, default=100),
        seed=opts.get("seed", int),
        workers=opts.get("workers", int),
    )
    elapsed = time.perf_counter() - t0
    rows = report.to_rows()
    doc = {"seed": report.seed, "replications": report.replications, "cells": rows}
    if args.output is None:
        sys.stdout.write(dumps_json(doc))
    else:
        write_json(doc, f"{args.output}.json")
        with open(f"{args.output}.csv", "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            keys = list(rows[0].keys())
            writer.writerow(keys)
            for row in rows:
                writer.writerow(
                    [
                        ""
                        if row[k] is None
                        else (format_float(row[k]) if isinstance(row[k], float) else row[k])
                        for k in keys
                    ]
                )
    print(f"elapsed_seconds={elapsed:.3f}", file=sys.stderr)
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _add_common(sub):
    sub.add_argument("--delta", type=float, help="boundary fraction excluded at both ends")
    sub.add_argument("-R", "--permutations", type=int, help="permutation count")
    sub.add_argument("--alpha", type=float, help="significance level")
    sub.add_argument("--seed", type=int, help="random seed")
    sub.add_argument(
        "--add-one",
        dest="add_one",
        action="store_const",
        const=True,
        help="use the (1 + #{T >= T_obs}) / (R + 1) p-value variant",
    )
    sub.add_argument("--bandwidth", help="'median' (default) or a fixed positive value")
    sub.add_argument("--config", help="key=value file supplying any flag")
    sub.add_argument("--output", "-o", help="output path (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mmdseg",
        description="MMD-based offline changepoint detection for functional data",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    for algo, blurb in (
        ("u", "unknown number of changepoints (permutation-gated recursion)"),
        ("s", "known number of changepoints K (forced split and merge)"),
        ("ss", "bounds K_l <= K <= K_u (backward elimination)"),
        ("forward", "lower bound only (forced split, then recursion)"),
    ):
        sub = subs.add_parser(f"detect-{algo}", help=blurb)
        sub.add_argument("input", help="CSV file, one observation per row")
        _add_common(sub)
        sub.add_argument("--format", choices=("json", "csv"), help="output format")
        if algo == "s":
            sub.add_argument("-K", "--changepoints", type=int, help="number of changepoints")
        if algo in ("ss", "forward"):
            sub.add_argument("--lower", type=int, help="lower bound K_l")
        if algo == "ss":
            sub.add_argument("--upper", type=int, help="upper bound K_u")
        sub.set_defaults(func=_cmd_detect, algorithm=algo)

    sub = subs.add_parser("simulate", help="draw a sample from a benchmark model")
    sub.add_argument("output", help="CSV path; truth labels go to <output>.truth.json")
    sub.add_argument("--model", choices=MODEL_IDS, help="model id")
    sub.add_argument("--lengths", help="comma-separated segment lengths")
    sub.add_argument("--grid-size", type=int, help=f"grid points (default {DEFAULT_GRID_SIZE})")
    sub.add_argument("--param", action="append", help="model parameter, e.g. c=0.5")
    sub.add_argument("--seed", type=int, help="random seed")
    sub.add_argument("--config", help="key=value file supplying any flag")
    sub.set_defaults(func=_cmd_simulate)

    sub = subs.add_parser(
        "oracle-curve", help="export labeled and empirical split curves as CSV"
    )
    sub.add_argument("--input", help="CSV dataset (requires --segment-lengths)")
    sub.add_argument("--segment-lengths", help="true segment lengths of --input")
    sub.add_argument("--model", choices=MODEL_IDS, help="simulate this model instead")
    sub.add_argument("--lengths", help="segment lengths for --model")
    sub.add_argument("--param", action="append", help="model parameter, e.g. c=0.5")
    sub.add_argument("--grid-size", type=int)
    sub.add_argument("--seed", type=int, help="random seed")
    sub.add_argument("--bandwidth", help="'median' (default) or a fixed positive value")
    sub.add_argument("--config", help="key=value file supplying any flag")
    sub.add_argument("--output", "-o", help="output path (default: stdout)")
    sub.set_defaults(func=_cmd_oracle_curve)

    sub = subs.add_parser("benchmark", help="Monte Carlo success rates for one cell")
    sub.add_argument("--model", choices=MODEL_IDS, required=True)
    sub.add_argument("--lengths", required=True, help="comma-separated segment lengths")
    sub.add_argument("--algorithm", choices=("u", "s", "ss", "forward"), required=True)
    sub.add_argument("--replications", type=int)
    sub.add_argument("--param", action="append", help="model parameter, e.g. c=0.5")
    sub.add_argument("--grid-size", type=int)
    sub.add_argument("-K", "--changepoints", type=int, help="K for algorithm s")
    sub.add_argument("--lower", type=int, help="K_l for ss/forward")
    sub.add_argument("--upper", type=int, help="K_u for ss")
    sub.add_argument("--workers", type=int, help="parallel replication workers")
    _add_common(sub)
    sub.set_defaults(func=_cmd_benchmark)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigurationError as exc:
        sys.stderr.write(dumps_json({"error": str(exc), "kind": "configuration"}))
        return 2
    except DataError as exc:
        sys.stderr.write(dumps_json({"error": str(exc), "kind": "data"}))
        return 3


if __name__ == "__main__":
    sys.exit(main())
