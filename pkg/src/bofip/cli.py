"""Command-line interface: run experiments, run suites, inspect result files.

Config files are flat ``key = value`` text ('#' starts a comment). Flags and
``--set key=value`` pairs override file values; the ``BOFIP_OUTDIR``
environment variable overrides the output directory only. Exit codes:
0 success, 2 configuration error, 3 parse/schema error, 1 other runtime
failure.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .driver import BofipConfig
from .errors import BofipError, ConfigurationError, ParseError, SchemaError
from .harness import ExperimentConfig, read_trace, run_experiment
from .presets import DESK_SUITE, desk_nn_502, full_repeated_branin
from .surrogate import GpConfig

_BOOL = {"true": True, "false": False, "1": True, "0": False, "yes": True, "no": False}

# key -> (coercion, description)
CONFIG_KEYS = {
    "problem": (str, "problem name (registry name or nn_<weights>)"),
    "d": (int, "total dimensions"),
    "p": (int, "number of sub-spaces"),
    "n_g": (int, "grid rows per sub-space"),
    "sweeps": (int, "outer iterations (T)"),
    "bo_budget": (int, "raw evaluations per sub-space per sweep"),
    "n_complements": (int, "complement draws freezing each sub-problem"),
    "n_initial": (int, "initial design rows (default 2*d_i+2, capped)"),
    "replications": (int, "independent macro-replications"),
    "wall_clock_limit": (float, "seconds per replication"),
    "sweep_mode": (str, "sequential | snapshot"),
    "grid_scheme": (str, "auto | uniform-lattice | latin-hypercube"),
    "seed": (int, "base seed (replication i uses seed+i)"),
    "outdir": (str, "output directory"),
    "dataset": (str, "dataset path (NN problems)"),
    "log_beliefs": (lambda s: _BOOL[s.lower()], "record belief snapshots"),
    "log_bo_steps": (lambda s: _BOOL[s.lower()], "record per-step search events"),
    "gp_restarts": (int, "surrogate likelihood restarts"),
    "gp_maxiter": (int, "surrogate optimizer iterations per restart"),
}


def parse_config_file(path) -> dict:
    values: dict[str, str] = {}
    for lineno, line in enumerate(
        Path(path).read_text(encoding="utf-8").splitlines(), start=1
    ):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ParseError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (part.strip() for part in stripped.split("=", 1))
        if key not in CONFIG_KEYS:
            raise ConfigurationError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = value
    return values


def _coerce(values: dict) -> dict:
    out = {}
    for key, raw in values.items():
        caster, _ = CONFIG_KEYS[key]
        try:
            out[key] = caster(raw)
        except (ValueError, KeyError) as exc:
            raise ConfigurationError(f"bad value for {key}: {raw!r}") from exc
    return out


def build_experiment(values: dict) -> ExperimentConfig:
    v = _coerce(values)
    for required in ("problem", "d", "p", "n_g", "sweeps", "bo_budget"):
        if required not in v:
            raise ConfigurationError(f"missing required key {required!r}")
    gp_kwargs = {}
    if "gp_restarts" in v:
        gp_kwargs["restarts"] = v["gp_restarts"]
    if "gp_maxiter" in v:
        gp_kwargs["maxiter"] = v["gp_maxiter"]
    bofip = BofipConfig(
        p=v["p"],
        n_g=v["n_g"],
        sweeps=v["sweeps"],
        bo_budget=v["bo_budget"],
        n_complements=v.get("n_complements", 1),
        n_initial=v.get("n_initial"),
        sweep_mode=v.get("sweep_mode", "sequential"),
        grid_scheme=v.get("grid_scheme", "auto"),
        seed=v.get("seed", 0),
        gp=GpConfig(**gp_kwargs) if gp_kwargs else GpConfig(),
        log_beliefs=v.get("log_beliefs", False),
        log_bo_steps=v.get("log_bo_steps", False),
    )
    outdir = os.environ.get("BOFIP_OUTDIR", v.get("outdir", "results"))
    return ExperimentConfig(
        problem=v["problem"],
        d=v["d"],
        bofip=bofip,
        replications=v.get("replications", 5),
        wall_clock_limit=v.get("wall_clock_limit"),
        outdir=outdir,
        base_seed=v.get("seed", 0),
        dataset=v.get("dataset"),
    )


def _print_summary(summary) -> None:
    print(f"problem={summary.problem} d={summary.d} reps={summary.replications}")
    print(f"  mean best f      : {summary.mean_best_f:.6g} "
          f"(+/- {summary.two_se_best_f:.3g})")
    if summary.mean_gap is not None:
        print(f"  mean gap |f-f*|  : {summary.mean_gap:.6g} "
              f"(+/- {summary.two_se_gap:.3g})")
    if summary.mean_distance is not None:
        print(f"  mean ||x-x*||    : {summary.mean_distance:.6g} "
              f"(+/- {summary.two_se_distance:.3g})")


def cmd_run(args) -> int:
    values = parse_config_file(args.config) if args.config else {}
    for pair in args.set or []:
        if "=" not in pair:
            raise ConfigurationError(f"--set needs key=value, got {pair!r}")
        key, value = pair.split("=", 1)
        if key.strip() not in CONFIG_KEYS:
            raise ConfigurationError(f"unknown key {key.strip()!r}")
        values[key.strip()] = value.strip()
    if args.outdir:
        values["outdir"] = args.outdir
    if args.seed is not None:
        values["seed"] = str(args.seed)
    if args.replications is not None:
        values["replications"] = str(args.replications)
    config = build_experiment(values)
    summary, paths = run_experiment(config)
    _print_summary(summary)
    print(f"  files            : {', '.join(str(p) for p in paths)}")
    return 0


def cmd_suite(args) -> int:
    outroot = Path(os.environ.get("BOFIP_OUTDIR", args.outdir))
    wanted = args.problems.split(",") if args.problems else None
    ran = 0
    for name, factory in DESK_SUITE.items():
        if wanted and name not in wanted:
            continue
        if args.scale == "full":
            if name != "repeated_branin":
                print(f"[skip] no full-scale preset wired for {name}", flush=True)
                continue
            config = full_repeated_branin(outdir=outroot / name, base_seed=args.seed)
        else:
            config = factory(outdir=outroot / name, base_seed=args.seed)
        print(f"[run] {name} (d={config.d}, {config.replications} reps)", flush=True)
        summary, _ = run_experiment(config)
        _print_summary(summary)
        ran += 1
    if args.dataset and (wanted is None or "nn_502" in wanted):
        config = desk_nn_502(args.dataset, outdir=outroot / "nn_502", base_seed=args.seed)
        print(f"[run] nn_502 ({config.replications} reps)", flush=True)
        summary, _ = run_experiment(config)
        _print_summary(summary)
        ran += 1
    if ran == 0:
        raise ConfigurationError("no suite entries selected")
    return 0


def cmd_inspect(args) -> int:
    status = 0
    for path in args.paths:
        path = Path(path)
        if path.name.startswith("summary"):
            print(f"{path}:")
            print(path.read_text(encoding="utf-8").rstrip())
            continue
        rows = read_trace(path)
        if not rows:
            print(f"{path}: empty trace (header only)")
            continue
        bests = [r["record_best_f"] for r in rows]
        monotone = all(b2 <= b1 for b1, b2 in zip(bests, bests[1:]))
        print(
            f"{path}: {len(rows)} record points, final best {bests[-1]:.6g} "
            f"at {rows[-1]['wall_clock_s']:.2f}s / {rows[-1]['total_evals']} evals, "
            f"monotone={'ok' if monotone else 'VIOLATION'}"
        )
        if not monotone:
            status = 1
    return status


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bofip",
        description="Sub-space Bayesian optimization benchmark harness",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run one experiment from a config file")
    run_p.add_argument("--config", help="flat key=value config file")
    run_p.add_argument("--set", action="append", metavar="KEY=VALUE",
                       help="override a config key (repeatable)")
    run_p.add_argument("--outdir", help="output directory")
    run_p.add_argument("--seed", type=int, help="base seed")
    run_p.add_argument("--replications", type=int)
    run_p.set_defaults(func=cmd_run)

    suite_p = sub.add_parser("suite", help="run the benchmark suite")
    suite_p.add_argument("--scale", choices=("desk", "full"), default="desk",
                         help="desk: minutes per problem; full: hours-days")
    suite_p.add_argument("--problems", help="comma-separated subset")
    suite_p.add_argument("--outdir", default="results/suite")
    suite_p.add_argument("--seed", type=int, default=0)
    suite_p.add_argument("--dataset", help="dataset path enabling the NN entry")
    suite_p.set_defaults(func=cmd_suite)

    inspect_p = sub.add_parser("inspect", help="summarize trace/summary files")
    inspect_p.add_argument("paths", nargs="+")
    inspect_p.set_defaults(func=cmd_inspect)
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except (ParseError, SchemaError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 3
    except (BofipError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
