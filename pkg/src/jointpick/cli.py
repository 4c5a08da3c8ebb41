"""Command-line entry point: ``jointpick <command> [options]``.

Option values resolve as command-line flag, then config file, then built-in
default. The config file is INI-style; keys in ``[defaults]`` apply to every
command and a section named after the command overrides them::

    [defaults]
    seed = 7
    [simulate]
    trials = 200000

Files are written under ``--out`` when given, otherwise under
``$JOINTPICK_OUTPUT_DIR`` (default ``./jointpick-out``) for commands that
produce several files. Exit codes: 0 success, 1 usage error, 2 failed check.
"""

from __future__ import annotations

import argparse
import configparser
import json
import os
import sys
from pathlib import Path

from . import experiments as X
from . import verification as V
from .events import verify_bijection
from .pipeline import (MallowsAgents, PipelineConfig, RumAgents, estimate_success,
                       estimate_record, estimates_to_csv, exact_success)

OUTPUT_ENV = "JOINTPICK_OUTPUT_DIR"

DEFAULTS = {
    "n": 3, "k": 2, "phi_a": 1.0, "phi_h": 1.0, "sigma_a": X.DEFAULT_SIGMA,
    "sigma_h": X.DEFAULT_SIGMA, "weight": 0.0, "trials": 50_000, "batches": 1, "seed": 0,
    "model": "mallows", "format": None, "out": None, "phi_min": 0.1, "phi_max": 3.0,
    "resolution": 60,
}
TYPES = {"n": int, "k": int, "phi_a": float, "phi_h": float, "sigma_a": float,
         "sigma_h": float, "weight": float, "trials": int, "batches": int, "seed": int,
         "model": str, "format": str, "out": str, "phi_min": float, "phi_max": float,
         "resolution": int}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _common(p: argparse.ArgumentParser, *names: str) -> None:
    flags = {
        "n": dict(help="number of items"),
        "k": dict(help="number of items presented"),
        "phi_a": dict(help="algorithm Mallows accuracy"),
        "phi_h": dict(help="human Mallows accuracy"),
        "sigma_a": dict(help="algorithm RUM noise"),
        "sigma_h": dict(help="human RUM noise"),
        "weight": dict(help="anchor weight in [0, 1]"),
        "trials": dict(help="Monte Carlo draws per batch"),
        "batches": dict(help="independent batches (seeds seed, seed+1, ...)"),
        "seed": dict(help="base random seed"),
        "model": dict(choices=["mallows", "rum"], help="noise model"),
        "format": dict(choices=["csv", "json", "svg"], help="output format"),
        "out": dict(help="output file or directory"),
        "phi_min": dict(help="lower end of the phi grid"),
        "phi_max": dict(help="upper end of the phi grid"),
        "resolution": dict(help="grid points per axis"),
    }
    for name in names:
        p.add_argument("--" + name.replace("_", "-"), dest=name, default=None, **flags[name])


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="jointpick", description=__doc__.split("\n")[0])
    parser.add_argument("--config", help="INI config file")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("exact", help="exact success probabilities (Mallows)")
    _common(p, "n", "k", "phi_a", "phi_h", "weight", "format", "out")

    p = sub.add_parser("simulate", help="Monte Carlo success probabilities")
    _common(p, "model", "n", "k", "phi_a", "phi_h", "sigma_a", "sigma_h", "weight",
            "trials", "batches", "seed", "format", "out")

    p = sub.add_parser("bijection", help="exhaustive good/bad event bijection check")
    _common(p, "n", "k", "out")

    p = sub.add_parser("region", help="closed-form complementarity grid for n=3, k=2")
    _common(p, "phi_min", "phi_max", "resolution", "format", "out")

    p = sub.add_parser("figure", help="reproduce a figure dataset")
    p.add_argument("name", choices=sorted(X.FIGURES))
    _common(p, "n", "phi_a", "sigma_a", "trials", "batches", "seed", "resolution",
            "format", "out")

    p = sub.add_parser("verify", help="run every acceptance check")
    _common(p, "seed", "out")
    p.add_argument("--only", action="append", choices=list(V.CHECKS),
                   help="restrict to the named check (repeatable)")
    return parser


def _load_config(path: str | None, command: str) -> dict:
    if not path:
        return {}
    cp = configparser.ConfigParser()
    if not cp.read(path):
        raise UsageError(f"cannot read config file {path}")
    values = dict(cp["defaults"]) if cp.has_section("defaults") else {}
    if cp.has_section(command):
        values.update(cp[command])
    return {k.replace("-", "_"): v for k, v in values.items()}


def resolve(args: argparse.Namespace) -> dict:
    """Merge flags over config-file values over built-in defaults."""
    from_file = _load_config(args.config, args.command)
    out = {}
    for key, default in DEFAULTS.items():
        flag = getattr(args, key, None)
        raw = flag if flag is not None else from_file.get(key)
        if raw is None:
            out[key] = default
            continue
        try:
            out[key] = TYPES[key](raw)
        except ValueError as exc:
            raise UsageError(f"bad value for {key}: {raw!r}") from exc
    return out


def _out_dir(opts: dict) -> Path:
    path = Path(opts["out"] or os.environ.get(OUTPUT_ENV, "jointpick-out"))
    path.mkdir(parents=True, exist_ok=True)
    return path


def _emit(text: str, opts: dict) -> None:
    if opts["out"]:
        Path(opts["out"]).parent.mkdir(parents=True, exist_ok=True)
        Path(opts["out"]).write_text(text)
    else:
        sys.stdout.write(text)


def _estimate_output(est, fmt: str | None) -> str:
    if fmt == "json":
        return json.dumps(estimate_record(est), indent=2) + "\n"
    if fmt == "svg":
        raise UsageError("svg output is only available for figures and regions")
    return estimates_to_csv([est])


def cmd_exact(opts: dict) -> int:
    cfg = PipelineConfig(opts["n"], opts["k"], MallowsAgents(opts["phi_a"], opts["phi_h"]),
                         opts["weight"])
    _emit(_estimate_output(exact_success(cfg), opts["format"]), opts)
    return 0


def cmd_simulate(opts: dict) -> int:
    if opts["model"] == "rum":
        model = RumAgents(opts["sigma_a"], opts["sigma_h"])
    else:
        model = MallowsAgents(opts["phi_a"], opts["phi_h"])
    cfg = PipelineConfig(opts["n"], opts["k"], model, opts["weight"])
    est = estimate_success(cfg, opts["trials"], opts["seed"], opts["batches"])
    _emit(_estimate_output(est, opts["format"]), opts)
    return 0


def cmd_bijection(opts: dict, k_given: bool) -> int:
    ks = [opts["k"]] if k_given else range(1, opts["n"])
    reports = [json.loads(verify_bijection(opts["n"], k).to_json()) for k in ks]
    _emit(json.dumps(reports, indent=2) + "\n", opts)
    return 0 if all(r["ok"] for r in reports) else 2


def _write_dataset(ds: X.FigureDataset, opts: dict) -> None:
    fmt = opts["format"]
    if fmt and opts["out"] and Path(opts["out"]).suffix:
        text = {"csv": ds.to_csv, "json": ds.metadata_json, "svg": lambda: X.render_svg(ds)}[fmt]()
        _emit(text, opts)
        return
    out = _out_dir(opts)
    if fmt in (None, "csv"):
        (out / f"{ds.name}.csv").write_text(ds.to_csv())
    if fmt in (None, "json"):
        (out / f"{ds.name}.meta.json").write_text(ds.metadata_json() + "\n")
    if fmt in (None, "svg"):
        (out / f"{ds.name}.svg").write_text(X.render_svg(ds))
    print(f"wrote {ds.name} to {out}")


def cmd_region(opts: dict) -> int:
    ds = X.run_region_figure((opts["phi_min"], opts["phi_max"]), opts["resolution"])
    if not opts["out"] and opts["format"] in (None, "csv"):
        sys.stdout.write(ds.to_csv())
        return 0
    _write_dataset(ds, opts)
    return 0


def cmd_figure(opts: dict, args: argparse.Namespace) -> int:
    given = {k for k in DEFAULTS if getattr(args, k, None) is not None}
    given |= set(_load_config(args.config, args.command))
    name = args.name
    kw = {}
    if name == "mallows-region":
        kw = {"phi_range": (opts["phi_min"], opts["phi_max"])}
        if "resolution" in given:
            kw["resolution"] = opts["resolution"]
    else:
        for key in ("n", "trials", "seed"):
            if key in given:
                kw[key] = opts[key]
        if name != "rum-contour" and "batches" in given:
            kw["batches"] = opts["batches"]
        if name == "mallows-anchor" and "phi_a" in given:
            kw["phi"] = opts["phi_a"]
        if name == "rum-anchor" and "sigma_a" in given:
            kw["sigma"] = opts["sigma_a"]
    _write_dataset(X.FIGURES[name](**kw), opts)
    return 0


def cmd_verify(opts: dict, only) -> int:
    out = _out_dir(opts)
    results = V.run_verification_suite(opts["seed"], only=only, log=print)
    for check in results:
        for ds in check.datasets:
            (out / f"{ds.name}.csv").write_text(ds.to_csv())
    summary = X.FigureDataset("checks", "-", ["name", "passed"],
                              [{"name": c.name, "passed": c.passed} for c in results])
    (out / "checks.csv").write_text(summary.to_csv())
    (out / "verify_report.json").write_text(V.report_json(results, opts["seed"]) + "\n")
    passed = all(c.passed for c in results)
    print(f"{'all checks passed' if passed else 'VERIFICATION FAILED'}; report in {out}")
    return 0 if passed else 2


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        opts = resolve(args)
        if args.command == "exact":
            return cmd_exact(opts)
        if args.command == "simulate":
            return cmd_simulate(opts)
        if args.command == "bijection":
            k_given = args.k is not None or "k" in _load_config(args.config, "bijection")
            return cmd_bijection(opts, k_given)
        if args.command == "region":
            return cmd_region(opts)
        if args.command == "figure":
            return cmd_figure(opts, args)
        return cmd_verify(opts, args.only)
    except (UsageError, ValueError, TypeError) as exc:
        print(f"jointpick: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
