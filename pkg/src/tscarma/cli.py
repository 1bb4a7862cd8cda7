"""Command-line front end: config ingestion, subcommand dispatch, CSV emission.

Grammar::

    tscarma <subcommand> --config FILE [--seed U64] [--jobs N] [--full] [--out PATH]

Subcommands: ``validate``, ``simulate``, ``mc-table``, ``iid``, ``moments``,
``error-bound``.  Exit codes: 0 success, 1 argument-parse failure,
2 validation error, 3 numeric failure.  Setting ``TOOL_DETERMINISTIC=1``
forces ``--jobs 1``.  All randomness derives from the single seed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass

import numpy as np

from .carma import spec_from_config, validate
from .carmasim import error_bound, error_bounds_to_csv, path_to_csv, simulate_general_path, simulate_subordinator_path
from .errors import (
    ConfigError,
    ConsistencyError,
    ConvergenceError,
    DomainError,
    LinearAlgebraError,
    QuadratureError,
    TscarmaError,
    UnsupportedError,
    ValidationError,
)
from .levyseries import SeriesConfig
from .mcharness import emit_density_data, report_to_csv, run_accuracy_experiment, run_iid_experiment
from .moments import for_model, moments_to_csv
from .tempering import model_from_config

_CONFIG_KEYS = {"model", "carma", "T", "kappa", "n", "seed", "grid_step", "output_path"}
_DESK_REPLICATIONS = 2000
_FULL_REPLICATIONS = 10_000
_IID_SAMPLE_SIZE = 1000


@dataclass(frozen=True)
class RunConfig:
    """Validated run configuration; ``model`` and ``carma`` keep their JSON shape."""

    model: dict
    carma: dict
    T: float
    kappa: float
    n: int
    seed: int
    grid_step: float
    output_path: str

    def to_dict(self) -> dict:
        return asdict(self)

    def build_model(self):
        try:
            return model_from_config(self.model)
        except ValidationError as exc:
            raise ConfigError(str(exc), key="model") from exc

    def build_carma(self):
        try:
            return spec_from_config(self.carma)
        except ValidationError as exc:
            raise ConfigError(str(exc), key="carma") from exc

    def series(self, seed: int | None = None) -> SeriesConfig:
        return SeriesConfig(
            horizon=self.T, lookback=self.kappa, truncation=self.n,
            seed=self.seed if seed is None else seed,
        )

    def grid(self) -> np.ndarray:
        steps = round(self.T / self.grid_step)
        return np.linspace(0.0, self.T, steps + 1)


def config_from_dict(raw: dict) -> RunConfig:
    if not isinstance(raw, dict):
        raise ConfigError("top-level config must be an object")
    unknown = set(raw) - _CONFIG_KEYS
    if unknown:
        raise ConfigError(f"unknown keys {sorted(unknown)}", key="config")
    missing = _CONFIG_KEYS - set(raw)
    if missing:
        raise ConfigError(f"missing keys {sorted(missing)}", key="config")
    try:
        cfg = RunConfig(
            model=dict(raw["model"]),
            carma=dict(raw["carma"]),
            T=float(raw["T"]),
            kappa=float(raw["kappa"]),
            n=int(raw["n"]),
            seed=int(raw["seed"]),
            grid_step=float(raw["grid_step"]),
            output_path=str(raw["output_path"]),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"malformed value: {exc}", key="config") from exc
    if not cfg.T > 0:
        raise ConfigError("T must be positive", key="T")
    if cfg.kappa < 0:
        raise ConfigError("kappa must be non-negative", key="kappa")
    if cfg.n < 1:
        raise ConfigError("n must be >= 1", key="n")
    if cfg.seed < 0:
        raise ConfigError("seed must be non-negative", key="seed")
    if not cfg.grid_step > 0:
        raise ConfigError("grid_step must be positive", key="grid_step")
    steps = round(cfg.T / cfg.grid_step)
    if steps < 1 or abs(steps * cfg.grid_step - cfg.T) > 1e-9:
        raise ConfigError("grid_step must divide T within 1e-9", key="grid_step")
    cfg.build_model()
    cfg.build_carma()
    return cfg


def load_config(path: str) -> RunConfig:
    """Read and fully validate a JSON run configuration; unknown keys are rejected."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}", key=path) from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc}", key=path) from exc
    return config_from_dict(raw)


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tscarma", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("validate", "simulate", "mc-table", "iid", "moments", "error-bound"):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--jobs", type=int, default=1)
        p.add_argument("--full", action="store_true")
        p.add_argument("--out", default=None)
    return parser


def _cmd_validate(cfg: RunConfig, ns) -> int:
    cfg.build_model()
    decomp = validate(cfg.build_carma())
    print("lambda," + ",".join(f"{v:.12g}" for v in decomp.lambdas))
    print("residue," + ",".join(f"{v:.12g}" for v in decomp.residues))
    print(f"nonneg_kernel,{str(decomp.nonneg_kernel).lower()}")
    return 0


def _cmd_simulate(cfg: RunConfig, ns) -> int:
    model = cfg.build_model()
    spec = cfg.build_carma()
    series = cfg.series(ns.seed)
    grid = cfg.grid()
    if model.is_subordinator:
        path = simulate_subordinator_path(model, spec, series, grid)
    else:
        path = simulate_general_path(model, spec, series, grid)
    _write(_out_path(cfg, ns), path_to_csv(path))
    return 0


def _cmd_mc_table(cfg: RunConfig, ns) -> int:
    model = cfg.build_model()
    spec = cfg.build_carma()
    replications = _FULL_REPLICATIONS if ns.full else _DESK_REPLICATIONS
    times = sorted({min(1.0, cfg.T), cfg.T})
    report = run_accuracy_experiment(
        model, spec, cfg.series(ns.seed), times, replications, jobs=ns.jobs
    )
    _write(_out_path(cfg, ns), report_to_csv(report))
    return 0


def _cmd_iid(cfg: RunConfig, ns) -> int:
    model = cfg.build_model()
    seed = cfg.seed if ns.seed is None else ns.seed
    report, samples = run_iid_experiment(model, cfg.n, _IID_SAMPLE_SIZE, seed)
    out = _out_path(cfg, ns)
    _write(out, report_to_csv(report))
    root, ext = os.path.splitext(out)
    _write(root + ".hist" + (ext or ".csv"), emit_density_data(samples, bins=50))
    return 0


def _cmd_moments(cfg: RunConfig, ns) -> int:
    model = cfg.build_model()
    _write(_out_path(cfg, ns), moments_to_csv([for_model(model, cfg.n)]))
    return 0


def _cmd_error_bound(cfg: RunConfig, ns) -> int:
    model = cfg.build_model()
    decomp = validate(cfg.build_carma())
    bounds = [error_bound(model, decomp, cfg.n, cfg.kappa, t) for t in cfg.grid()]
    _write(_out_path(cfg, ns), error_bounds_to_csv(bounds))
    return 0


def _out_path(cfg: RunConfig, ns) -> str:
    return ns.out if ns.out is not None else cfg.output_path


_COMMANDS = {
    "validate": _cmd_validate,
    "simulate": _cmd_simulate,
    "mc-table": _cmd_mc_table,
    "iid": _cmd_iid,
    "moments": _cmd_moments,
    "error-bound": _cmd_error_bound,
}


def dispatch(argv) -> int:
    """Parse arguments, run the subcommand, and map failures to exit codes."""
    parser = _build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    if os.environ.get("TOOL_DETERMINISTIC") == "1":
        ns.jobs = 1
    try:
        cfg = load_config(ns.config)
        return _COMMANDS[ns.command](cfg, ns)
    except (ConfigError, ValidationError, DomainError, UnsupportedError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (QuadratureError, ConvergenceError, ConsistencyError, LinearAlgebraError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3
    except TscarmaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
