"""Command-line entry point: config parsing, subcommands, output routing.

Config files are line-oriented ``key = value`` under ``[network]``,
``[model]`` and ``[run]`` sections with ``#`` comments. Swept keys (p, f0,
h00, h01, h11, alpha) accept comma-separated value lists. Command-line
overrides win over file values; a ``preset`` key expands to that preset's
full configuration before other keys apply.

Exit codes: 0 success, 1 runtime or configuration error, 2 usage error.
"""

from __future__ import annotations

import argparse
import configparser
import os
import sys
from dataclasses import dataclass, fields

from .engine import SEEDING_SCOPES
from .experiments import (
    PRESET_NAMES,
    SweepSpec,
    preset,
    run_sweep,
    run_timeseries,
    run_timeseries_by_density,
    write_csv,
    write_timeseries_csv,
)

WORKERS_ENV = "HOAXNET_WORKERS"


class ConfigError(Exception):
    """Invalid configuration; the message lists every violation found."""


@dataclass
class RunConfig:
    """Merged file + override configuration; None means "not set"."""

    preset: str | None = None
    family: str | None = None
    n: int | None = None
    p: tuple[float, ...] | None = None
    f0: tuple[float, ...] | None = None
    h00: tuple[float, ...] | None = None
    h01: tuple[float, ...] | None = None
    h11: tuple[float, ...] | None = None
    alpha: tuple[float, ...] | None = None
    beta: float | None = None
    p_verify: float | None = None
    p_forget: float | None = None
    steps: int | None = None
    iterations: int | None = None
    seed: int | None = None
    window: int | None = None
    workers: int | None = None
    out: str | None = None
    believer_fraction: float | None = None
    factchecker_fraction: float | None = None
    seeding_scope: str | None = None
    annealed: bool | None = None


def _parse_float_list(raw: str) -> tuple[float, ...]:
    values = tuple(float(part) for part in raw.split(",") if part.strip())
    if not values:
        raise ValueError("empty value list")
    return values


def _parse_bool(raw: str) -> bool:
    lowered = raw.strip().lower()
    if lowered in ("true", "yes", "1", "on"):
        return True
    if lowered in ("false", "no", "0", "off"):
        return False
    raise ValueError(f"expected true/false, got {raw!r}")


def _in_unit(name):
    return lambda v: None if 0.0 <= v <= 1.0 else f"{name} must lie in [0, 1]; got {v}"


def _at_least(name, bound):
    return lambda v: None if v >= bound else f"{name} must be at least {bound}; got {v}"


def _unit_list(name):
    def check(values):
        bad = [v for v in values if not 0.0 <= v <= 1.0]
        if bad:
            return f"{name} values must lie in [0, 1]; got {bad}"
        return None

    return check


def _one_of(name, options):
    return lambda v: None if v in options else (
        f"{name} must be one of {', '.join(options)}; got {v!r}"
    )


# key -> (section, converter, range check or None)
_SCHEMA = {
    "family": ("network", str.strip, _one_of("family", ("er", "sbm"))),
    "n": ("network", int, _at_least("n", 1)),
    "p": ("network", _parse_float_list, _unit_list("p")),
    "f0": ("network", _parse_float_list, _unit_list("f0")),
    "h00": ("network", _parse_float_list, _unit_list("h00")),
    "h01": ("network", _parse_float_list, _unit_list("h01")),
    "h11": ("network", _parse_float_list, _unit_list("h11")),
    "alpha": (
        "model",
        _parse_float_list,
        lambda vs: None if all(-1.0 < v < 1.0 for v in vs)
        else f"alpha must lie in the open interval (-1, 1); got {list(vs)}",
    ),
    "beta": ("model", float, _in_unit("beta")),
    "p_verify": ("model", float, _in_unit("p_verify")),
    "p_forget": ("model", float, _in_unit("p_forget")),
    "steps": ("run", int, _at_least("steps", 0)),
    "iterations": ("run", int, _at_least("iterations", 1)),
    "seed": ("run", int, None),
    "window": ("run", int, _at_least("window", 1)),
    "workers": ("run", int, _at_least("workers", 1)),
    "out": ("run", str.strip, None),
    "preset": ("run", str.strip, _one_of("preset", PRESET_NAMES)),
    "believer_fraction": ("run", float, _in_unit("believer_fraction")),
    "factchecker_fraction": ("run", float, _in_unit("factchecker_fraction")),
    "seeding_scope": ("run", str.strip, _one_of("seeding_scope", SEEDING_SCOPES)),
    "annealed": ("run", _parse_bool, None),
}


def _preset_assignments(name: str) -> dict:
    """The config key/value pairs a preset expands to."""
    spec = preset(name).spec
    values = {
        "family": spec.family,
        "n": spec.n,
        "alpha": spec.alpha_values,
        "beta": spec.beta,
        "p_verify": spec.p_verify,
        "p_forget": spec.p_forget,
        "steps": spec.steps,
        "iterations": spec.iterations,
        "seed": spec.master_seed,
        "window": spec.window,
        "believer_fraction": spec.believer_fraction,
        "factchecker_fraction": spec.factchecker_fraction,
        "seeding_scope": spec.seeding_scope,
        "annealed": spec.annealed,
    }
    if spec.family == "er":
        values["p"] = spec.p_values
    else:
        values.update(
            f0=spec.f0_values, h00=spec.h00_values, h01=spec.h01_values, h11=spec.h11_values
        )
    return values


def parse_config(text: str, overrides: list[str] | None = None) -> RunConfig:
    """Parse config text plus ``key=value`` overrides into a RunConfig.

    Overrides win over file values. All violations (unknown keys, type
    mismatches, out-of-range values) are reported together.
    """
    errors: list[str] = []
    assignments: dict[str, str] = {}

    parser = configparser.ConfigParser(
        delimiters=("=",),
        comment_prefixes=("#",),
        inline_comment_prefixes=("#",),
        interpolation=None,
    )
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from exc

    for section in parser.sections():
        if section not in ("network", "model", "run"):
            errors.append(f"unknown section [{section}]")
            continue
        for key, raw in parser.items(section):
            if key not in _SCHEMA:
                errors.append(f"unknown key {key!r} in [{section}]")
            elif _SCHEMA[key][0] != section:
                errors.append(f"key {key!r} belongs in [{_SCHEMA[key][0]}], not [{section}]")
            else:
                assignments[key] = raw

    for item in overrides or []:
        key, sep, raw = item.partition("=")
        key = key.strip()
        if not sep:
            errors.append(f"override {item!r} is not of the form key=value")
        elif key not in _SCHEMA:
            errors.append(f"unknown key {key!r} in overrides")
        else:
            assignments[key] = raw

    values: dict = {}
    for key, raw in assignments.items():
        _, convert, check = _SCHEMA[key]
        try:
            value = convert(raw)
        except ValueError as exc:
            errors.append(f"invalid value for {key!r}: {exc}")
            continue
        if check is not None:
            problem = check(value)
            if problem:
                errors.append(problem)
                continue
        values[key] = value

    if errors:
        raise ConfigError("\n".join(errors))

    if "preset" in values:
        merged = _preset_assignments(values["preset"])
        merged.update(values)
        values = merged

    if (
        values.get("p_verify") is not None
        and values.get("p_forget") is not None
        and values["p_verify"] + values["p_forget"] > 1.0
    ):
        raise ConfigError(
            "p_verify + p_forget must not exceed 1; "
            f"got {values['p_verify']} + {values['p_forget']}"
        )

    return RunConfig(**values)


def build_sweep_spec(cfg: RunConfig) -> SweepSpec:
    """Turn a merged RunConfig into a validated SweepSpec."""
    required = ["family", "n", "alpha", "beta", "p_verify", "p_forget", "iterations"]
    if cfg.family == "er":
        required.append("p")
    elif cfg.family == "sbm":
        required.extend(["f0", "h00", "h01", "h11"])
    missing = [key for key in required if getattr(cfg, key) is None]
    if missing:
        raise ConfigError("missing required keys: " + ", ".join(missing))
    try:
        return SweepSpec(
            family=cfg.family,
            n=cfg.n,
            alpha_values=cfg.alpha,
            beta=cfg.beta,
            p_verify=cfg.p_verify,
            p_forget=cfg.p_forget,
            steps=cfg.steps if cfg.steps is not None else 1000,
            iterations=cfg.iterations,
            master_seed=cfg.seed if cfg.seed is not None else 0,
            p_values=cfg.p or (),
            f0_values=cfg.f0 or (),
            h00_values=cfg.h00 or (),
            h01_values=cfg.h01 or (),
            h11_values=cfg.h11 or (),
            window=cfg.window if cfg.window is not None else 1,
            believer_fraction=(
                cfg.believer_fraction if cfg.believer_fraction is not None else 0.01
            ),
            factchecker_fraction=(
                cfg.factchecker_fraction if cfg.factchecker_fraction is not None else 0.0
            ),
            seeding_scope=cfg.seeding_scope or "whole-network",
            annealed=cfg.annealed if cfg.annealed is not None else True,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _resolve_workers(cfg: RunConfig) -> int:
    if cfg.workers is not None:
        return cfg.workers
    env = os.environ.get(WORKERS_ENV)
    if env:
        try:
            value = int(env)
        except ValueError:
            raise ConfigError(f"{WORKERS_ENV} must be an integer; got {env!r}") from None
        if value < 1:
            raise ConfigError(f"{WORKERS_ENV} must be at least 1; got {value}")
        return value
    return os.cpu_count() or 1


def _progress_printer(label: str):
    def progress(done: int, total: int) -> None:
        print(f"{label}: point {done}/{total}", file=sys.stderr, flush=True)

    return progress


def _summary_line(row) -> str:
    def pair(mean, std):
        return f"{mean:.6g}±{std:.6g}"

    return (
        f"believers_global={pair(row.mean_believers_global, row.std_believers_global)} "
        f"believers_majority={pair(row.mean_believers_majority, row.std_believers_majority)} "
        f"believers_minority={pair(row.mean_believers_minority, row.std_believers_minority)}"
    )


def _load_config(args) -> RunConfig:
    text = ""
    if args.config is not None:
        try:
            with open(args.config) as handle:
                text = handle.read()
        except OSError as exc:
            raise ConfigError(f"cannot read config file {args.config}: {exc}") from exc
    overrides = []
    if getattr(args, "preset_name", None):
        overrides.append(f"preset={args.preset_name}")
    overrides.extend(args.set or [])
    if args.seed is not None:
        overrides.append(f"seed={args.seed}")
    if args.workers is not None:
        overrides.append(f"workers={args.workers}")
    if args.out is not None:
        overrides.append(f"out={args.out}")
    return parse_config(text, overrides)


def _cmd_run(cfg: RunConfig) -> int:
    spec = build_sweep_spec(cfg)
    if spec.grid_size != 1:
        raise ConfigError(f"'run' needs exactly one value per parameter; grid has {spec.grid_size}")
    rows = run_sweep(spec, workers=_resolve_workers(cfg))
    write_csv(rows, cfg.out or "run.csv")
    print(_summary_line(rows[0]))
    return 0


def _cmd_sweep(cfg: RunConfig) -> int:
    spec = build_sweep_spec(cfg)
    rows = run_sweep(spec, workers=_resolve_workers(cfg), progress=_progress_printer("sweep"))
    write_csv(rows, cfg.out or "sweep.csv")
    return 0


def _cmd_timeseries(cfg: RunConfig) -> int:
    spec = build_sweep_spec(cfg)
    if spec.grid_size != 1:
        raise ConfigError(
            f"'timeseries' needs exactly one value per parameter; grid has {spec.grid_size}"
        )
    series = run_timeseries(spec, workers=_resolve_workers(cfg))
    write_timeseries_csv([(None, series)], cfg.out or "timeseries.csv")
    return 0


def _cmd_preset(cfg: RunConfig) -> int:
    kind = preset(cfg.preset).kind
    spec = build_sweep_spec(cfg)
    out = cfg.out or f"{cfg.preset}.csv"
    workers = _resolve_workers(cfg)
    if kind == "timeseries-by-density":
        blocks = run_timeseries_by_density(
            spec, workers=workers, progress=_progress_printer(cfg.preset)
        )
        write_timeseries_csv(blocks, out)
    else:
        rows = run_sweep(spec, workers=workers, progress=_progress_printer(cfg.preset))
        write_csv(rows, out)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hoaxnet",
        description="Hoax-spread Monte Carlo experiments on random networks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    commands = {
        "run": "single ensemble: CSV row plus a summary line",
        "sweep": "parameter grid: one CSV row per grid point",
        "timeseries": "single point: mean believer share per step",
        "preset": "built-in experiment (fig2a, fig2b, fig3)",
    }
    for name, help_text in commands.items():
        p = sub.add_parser(name, help=help_text)
        if name == "preset":
            p.add_argument("preset_name", choices=PRESET_NAMES, metavar="name")
        p.add_argument("--config", help="config file path")
        p.add_argument("--seed", type=int, help="master seed override")
        p.add_argument("--workers", type=int, help="worker process count")
        p.add_argument("--out", help="output CSV path")
        p.add_argument(
            "--set",
            action="append",
            metavar="KEY=VALUE",
            help="override any config key (repeatable)",
        )
    return parser


def main(argv=None) -> int:
    """Run the CLI; returns the process exit code instead of raising SystemExit."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    handlers = {
        "run": _cmd_run,
        "sweep": _cmd_sweep,
        "timeseries": _cmd_timeseries,
        "preset": _cmd_preset,
    }
    try:
        cfg = _load_config(args)
        return handlers[args.command](cfg)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"hoaxnet: {exc}", file=sys.stderr)
        return 1


def entry() -> None:
    sys.exit(main())
