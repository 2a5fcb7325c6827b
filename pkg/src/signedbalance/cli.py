"""Command-line surface: measure, null-test, predict-loo, predict-multi,
generate, verify.

Every command embeds a run manifest (the command, inputs, all resolved
parameters, and the tool version) in its output; re-running the same
manifest reproduces the output byte for byte.  Exit codes: 0 success,
1 verification failure, 2 input error, 3 numeric-domain error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from ._kernels import backend_name
from .exceptions import ConvergenceDomainError, EdgeListError
from .graph import (
    SignedNetwork,
    negative_fraction,
    parse_edge_list,
    parse_layered_edge_list,
    planted_faction_network,
    serialize_edge_list,
)
from .measures import METRICS, BalanceConfig, all_measures, b_eb, b_sa, b_strong, b_weak
from .nullmodel import eta_report
from .prediction import AnnealSchedule, loo_crossval, multi_crossval

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_INPUT_ERROR = 2
EXIT_NUMERIC_ERROR = 3

THREADS_ENV = "SIGNEDBALANCE_THREADS"


def _thread_budget() -> int:
    """Worker budget from the environment; execution is sequential with
    per-task RNG streams, so results never depend on this value."""
    raw = os.environ.get(THREADS_ENV, "").strip()
    if not raw:
        return 1
    try:
        value = int(raw)
    except ValueError as exc:
        raise EdgeListError(f"{THREADS_ENV} must be an integer, got {raw!r}") from exc
    if value < 1:
        raise EdgeListError(f"{THREADS_ENV} must be >= 1")
    return value


def load_layers(path: str, conflict_policy: str = "error") -> list[tuple[str | None, SignedNetwork]]:
    """Read an edge-list file, auto-detecting the 3-column single-layer and
    4-column layered formats from the first data line."""
    text = Path(path).read_text()
    width = None
    for raw in text.splitlines():
        line = raw.strip()
        if line and not line.startswith("#"):
            width = len(line.split())
            break
    if width is None:
        raise EdgeListError(f"{path}: no data lines")
    if width == 4:
        return [(name, net) for name, net in parse_layered_edge_list(text, conflict_policy)]
    return [(None, parse_edge_list(text, conflict_policy))]


def _manifest(command: str, inputs: list[str], parameters: dict) -> dict:
    return {
        "command": command,
        "inputs": inputs,
        "parameters": parameters,
        "numerics_backend": backend_name(),
        "version": __version__,
    }


def _emit(payload: dict, output: str | None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def _metric_list(metric: str) -> list[str]:
    return list(METRICS) if metric == "all" else [metric]


def cmd_measure(args) -> int:
    layers = load_layers(args.input, args.conflict_policy)
    results = []
    failed = False
    for name, net in layers:
        record: dict = {"layer": name, "n": net.n, "m": net.m}
        try:
            record["negative_fraction"] = negative_fraction(net) if net.m else 0.0
            if args.metric == "all":
                record["metrics"] = all_measures(net, args.alpha)
            elif args.metric == "weak":
                record["metrics"] = {"weak": b_weak(net, BalanceConfig("weak", args.alpha))}
            elif args.metric == "strong":
                record["metrics"] = {"strong": b_strong(net, BalanceConfig("strong", args.alpha))}
            elif args.metric == "eb":
                record["metrics"] = {"eb": b_eb(net)}
            else:
                record["metrics"] = {"sa": b_sa(net, BalanceConfig("sa", args.alpha))}
        except ConvergenceDomainError as exc:
            record["error"] = f"layer {name!r}: {exc}"
            failed = True
        results.append(record)
    payload = {
        "manifest": _manifest(
            "measure",
            [args.input],
            {"metric": args.metric, "alpha": args.alpha, "conflict_policy": args.conflict_policy},
        ),
        "results": results,
    }
    _emit(payload, args.output)
    return EXIT_NUMERIC_ERROR if failed else EXIT_OK


def cmd_null_test(args) -> int:
    layers = load_layers(args.input, args.conflict_policy)
    results = []
    failed = False
    for name, net in layers:
        record: dict = {"layer": name, "n": net.n, "m": net.m}
        try:
            reports = {}
            for metric in _metric_list(args.metric):
                rep = eta_report(
                    net,
                    BalanceConfig(metric, args.alpha),
                    samples=args.samples,
                    seed=args.seed,
                )
                reports[metric] = rep.to_dict(include_samples=args.dump_samples)
            record["eta"] = reports
        except ConvergenceDomainError as exc:
            record["error"] = f"layer {name!r}: {exc}"
            failed = True
        results.append(record)
    payload = {
        "manifest": _manifest(
            "null-test",
            [args.input],
            {
                "metric": args.metric,
                "alpha": args.alpha,
                "samples": args.samples,
                "seed": args.seed,
                "dump_samples": args.dump_samples,
                "conflict_policy": args.conflict_policy,
            },
        ),
        "results": results,
    }
    _emit(payload, args.output)
    return EXIT_NUMERIC_ERROR if failed else EXIT_OK


def cmd_predict_loo(args) -> int:
    layers = load_layers(args.input, args.conflict_policy)
    results = []
    failed = False
    for name, net in layers:
        record: dict = {"layer": name, "n": net.n, "m": net.m}
        try:
            report = loo_crossval(net, BalanceConfig(args.metric, args.alpha))
            record["prediction"] = report.to_dict()
        except ConvergenceDomainError as exc:
            record["error"] = f"layer {name!r}: {exc}"
            failed = True
        results.append(record)
    payload = {
        "manifest": _manifest(
            "predict-loo",
            [args.input],
            {"metric": args.metric, "alpha": args.alpha, "conflict_policy": args.conflict_policy},
        ),
        "results": results,
    }
    _emit(payload, args.output)
    return EXIT_NUMERIC_ERROR if failed else EXIT_OK


def _parse_fractions(raw: str) -> list[float]:
    try:
        fractions = [float(tok) for tok in raw.split(",") if tok.strip()]
    except ValueError as exc:
        raise EdgeListError(f"bad --remove-frac list: {raw!r}") from exc
    if not fractions or any(not (0.0 < f < 1.0) for f in fractions):
        raise EdgeListError("--remove-frac values must lie strictly between 0 and 1")
    return fractions


def cmd_predict_multi(args) -> int:
    layers = load_layers(args.input, args.conflict_policy)
    fractions = _parse_fractions(args.remove_frac)
    schedule = AnnealSchedule(
        t0=args.t0,
        tau=args.tau,
        steps=args.steps,
        refresh_every=args.refresh_every,
        seed=args.seed,
    )
    results = []
    csv_rows = []
    failed = False
    for name, net in layers:
        record: dict = {"layer": name, "n": net.n, "m": net.m, "fractions": []}
        for fi, frac in enumerate(fractions):
            try:
                # decorrelate fractions without coupling them to list order
                frac_schedule = AnnealSchedule(
                    t0=schedule.t0,
                    tau=schedule.tau,
                    steps=schedule.steps,
                    refresh_every=schedule.refresh_every,
                    seed=int(
                        np.random.SeedSequence([args.seed, fi]).generate_state(1)[0]
                    ),
                )
                report = multi_crossval(
                    net, frac, args.reps, BalanceConfig(args.metric, args.alpha), frac_schedule
                )
                record["fractions"].append(report.to_dict(include_reps=args.dump_reps))
                csv_rows.append(
                    (
                        name or "",
                        args.metric,
                        frac,
                        report.accuracy_mean,
                        report.accuracy_std,
                        report.nmi_mean,
                        report.nmi_std,
                        report.baseline_accuracy_mean,
                        report.reps,
                    )
                )
            except (ConvergenceDomainError, ValueError) as exc:
                record["fractions"].append({"remove_fraction": frac, "error": str(exc)})
                failed = True
        results.append(record)
    payload = {
        "manifest": _manifest(
            "predict-multi",
            [args.input],
            {
                "metric": args.metric,
                "alpha": args.alpha,
                "remove_frac": fractions,
                "reps": args.reps,
                "t0": args.t0,
                "tau": args.tau,
                "steps": args.steps,
                "refresh_every": args.refresh_every,
                "seed": args.seed,
                "conflict_policy": args.conflict_policy,
            },
        ),
        "results": results,
    }
    _emit(payload, args.output)
    if args.csv:
        header = (
            "layer,metric,remove_fraction,accuracy_mean,accuracy_std,"
            "nmi_mean,nmi_std,baseline_accuracy_mean,reps"
        )
        lines = [header]
        for row in csv_rows:
            lines.append(",".join(repr(x) if isinstance(x, float) else str(x) for x in row))
        Path(args.csv).write_text("\n".join(lines) + "\n")
    return EXIT_NUMERIC_ERROR if failed else EXIT_OK


def cmd_generate(args) -> int:
    net = planted_faction_network(args.nodes, args.factions, args.density, args.noise, args.seed)
    manifest = _manifest(
        "generate",
        [],
        {
            "nodes": args.nodes,
            "factions": args.factions,
            "density": args.density,
            "noise": args.noise,
            "seed": args.seed,
        },
    )
    header = "# manifest: " + json.dumps(manifest, sort_keys=True)
    Path(args.output).write_text(header + "\n" + serialize_edge_list(net))
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import run_verification

    report = run_verification(args.level)
    payload = {
        "manifest": _manifest("verify", [], {"level": args.level}),
        "checks": report["checks"],
        "passed": report["passed"],
    }
    _emit(payload, args.output)
    return EXIT_OK if report["passed"] else EXIT_VERIFY_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="signedbalance",
        description="Structural balance metrics, null tests, and sign prediction for signed networks.",
    )
    parser.add_argument("--version", action="version", version=f"signedbalance {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("input", help="edge-list file (3 columns 'u v s' or 4 columns 'layer u v s')")
        p.add_argument("--alpha", type=float, default=2.0, help="decay parameter (> 1)")
        p.add_argument(
            "--conflict-policy",
            choices=("error", "negative_wins"),
            default="error",
            help="how to resolve a pair listed with both signs",
        )
        p.add_argument("--output", default=None, help="write JSON here instead of stdout")

    p = sub.add_parser("measure", help="balance metric values per layer")
    add_common(p)
    p.add_argument("--metric", choices=METRICS + ("all",), default="all")
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("null-test", help="eta significance against the sign-shuffle null model")
    add_common(p)
    p.add_argument("--metric", choices=METRICS + ("all",), default="all")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dump-samples", action="store_true", help="include per-sample null values")
    p.set_defaults(func=cmd_null_test)

    p = sub.add_parser("predict-loo", help="leave-one-out single-sign prediction")
    add_common(p)
    p.add_argument("--metric", choices=METRICS, default="weak")
    p.set_defaults(func=cmd_predict_loo)

    p = sub.add_parser("predict-multi", help="multi-sign prediction by simulated annealing")
    add_common(p)
    p.add_argument("--metric", choices=METRICS, default="weak")
    p.add_argument("--remove-frac", default="0.1", help="comma-separated hidden fractions")
    p.add_argument("--reps", type=int, default=100)
    p.add_argument("--t0", type=float, default=0.1)
    p.add_argument("--tau", type=float, default=1e4)
    p.add_argument("--steps", type=int, default=1_000_000)
    p.add_argument("--refresh-every", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dump-reps", action="store_true", help="include per-rep scores")
    p.add_argument("--csv", default=None, help="also write the accuracy/NMI-vs-fraction curves as CSV")
    p.set_defaults(func=cmd_predict_multi)

    p = sub.add_parser("generate", help="write a planted-faction edge list")
    p.add_argument("output")
    p.add_argument("--nodes", type=int, default=60)
    p.add_argument("--factions", type=int, default=2)
    p.add_argument("--density", type=float, default=1.0)
    p.add_argument("--noise", type=float, default=0.05)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("verify", help="run the built-in oracle agreement checks")
    p.add_argument("--level", choices=("quick", "full"), default="quick")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _thread_budget()
        return args.func(args)
    except (EdgeListError, FileNotFoundError, ValueError) as exc:
        if isinstance(exc, ConvergenceDomainError):
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_NUMERIC_ERROR
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
