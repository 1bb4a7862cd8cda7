"""Monte Carlo experiments: accuracy tables, i.i.d.-variate runs, histogram data.

Accuracy is reported as empirical minus theoretical (mean and variance), with
standard errors so point values can be turned into testable bands.  All
replications run on independent deterministic streams derived from the master
seed and the replication index, and reduction happens in index order, so a
report is bitwise identical regardless of worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import moments as _moments
from .carma import CarmaSpec, validate
from .carmasim import simulate_general_path, simulate_subordinator_path, stationary_moments
from .errors import ValidationError
from .levyseries import SeriesConfig, sample_unit_increments
from .tempering import TemperingModel


@dataclass(frozen=True, eq=False)
class AccuracyReport:
    """Empirical-minus-theoretical accuracy at each evaluation time."""

    replications: int
    at_times: np.ndarray
    mean_accuracy: np.ndarray
    var_accuracy: np.ndarray
    mean_se: np.ndarray
    var_se: np.ndarray
    config: dict

    def __post_init__(self):
        sizes = {a.size for a in (self.at_times, self.mean_accuracy, self.var_accuracy, self.mean_se, self.var_se)}
        if len(sizes) != 1:
            raise ValidationError("report vectors must have equal length")
        if np.any(self.mean_se <= 0) or np.any(self.var_se <= 0):
            raise ValidationError("standard errors must be positive")


def _pick_scheme(model: TemperingModel, scheme: str) -> str:
    if scheme == "auto":
        return "subordinator" if model.is_subordinator else "general"
    if scheme not in ("subordinator", "general"):
        raise ValidationError(f"unknown scheme {scheme!r}")
    return scheme


def _chunk_values(args):
    model, spec, config, times, lo, hi, scheme = args
    out = np.empty((hi - lo, times.size))
    simulate = simulate_subordinator_path if scheme == "subordinator" else simulate_general_path
    for i, r in enumerate(range(lo, hi)):
        path = simulate(model, spec, replace(config, stream_index=r), times)
        out[i] = path.values
    return lo, out


def _accuracy_from_values(values: np.ndarray, mean_th: float, var_th: float) -> tuple:
    n = values.shape[0]
    means = values.mean(axis=0)
    variances = values.var(axis=0, ddof=1)
    mean_se = values.std(axis=0, ddof=1) / math.sqrt(n)
    m4 = ((values - means) ** 4).mean(axis=0)
    var_se = np.sqrt(np.maximum(m4 - variances**2, 1e-300) / n)
    return means - mean_th, variances - var_th, mean_se, var_se


def run_accuracy_experiment(
    model: TemperingModel,
    spec: CarmaSpec,
    config: SeriesConfig,
    times,
    replications: int,
    *,
    jobs: int = 1,
    scheme: str = "auto",
) -> AccuracyReport:
    """Simulate independent paths and compare empirical moments at ``times``
    against the stationary theory."""
    if replications < 2:
        raise ValidationError(f"replications must be >= 2, got {replications}")
    times = np.asarray(sorted(set(float(t) for t in times)))
    scheme = _pick_scheme(model, scheme)
    decomp = validate(spec)
    mean_th, var_th = stationary_moments(model, decomp)
    _moments.for_model(model, config.truncation)  # warm closed-form caches before forking

    values = np.empty((replications, times.size))
    chunk = max(1, min(256, math.ceil(replications / max(jobs, 1) / 4)))
    tasks = [
        (model, spec, config, times, lo, min(lo + chunk, replications), scheme)
        for lo in range(0, replications, chunk)
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for lo, block in pool.map(_chunk_values, tasks):
                values[lo : lo + block.shape[0]] = block
    else:
        for task in tasks:
            lo, block = _chunk_values(task)
            values[lo : lo + block.shape[0]] = block

    mean_acc, var_acc, mean_se, var_se = _accuracy_from_values(values, mean_th, var_th)
    return AccuracyReport(
        replications=replications,
        at_times=times,
        mean_accuracy=mean_acc,
        var_accuracy=var_acc,
        mean_se=mean_se,
        var_se=var_se,
        config={
            "model": model.name,
            "carma_a": spec.a,
            "carma_b": spec.b,
            "horizon": config.horizon,
            "lookback": config.lookback,
            "truncation": config.truncation,
            "seed": config.seed,
            "scheme": scheme,
        },
    )


def run_iid_experiment(
    model: TemperingModel, n: int, sample_size: int, seed: int
) -> tuple[AccuracyReport, np.ndarray]:
    """Draw i.i.d. unit-time truncated increments and compare their sample
    mean and variance against the full (untruncated) moments.

    The sample-mean accuracy fluctuates around the deterministic truncation
    bias -(m1 - m1_n); the lookback plays no role for a single increment.
    """
    if sample_size < 2:
        raise ValidationError(f"sample_size must be >= 2, got {sample_size}")
    samples = sample_unit_increments(model, n, sample_size, seed)
    mom = _moments.for_model(model, n)
    values = samples[:, None]
    mean_acc, var_acc, mean_se, var_se = _accuracy_from_values(values, mom.m1, mom.m2)
    report = AccuracyReport(
        replications=sample_size,
        at_times=np.asarray([1.0]),
        mean_accuracy=mean_acc,
        var_accuracy=var_acc,
        mean_se=mean_se,
        var_se=var_se,
        config={"model": model.name, "truncation": n, "seed": seed, "kind": "iid"},
    )
    return report, samples


def emit_density_data(samples, bins: int) -> str:
    """Histogram CSV ``bin_left,bin_right,density``; densities integrate to one."""
    samples = np.asarray(samples, dtype=float)
    if samples.size == 0:
        raise ValidationError("cannot build a histogram from an empty sample set")
    if bins < 1:
        raise ValidationError(f"bins must be >= 1, got {bins}")
    density, edges = np.histogram(samples, bins=bins, density=True)
    lines = ["bin_left,bin_right,density"]
    lines.extend(f"{lo:.17g},{hi:.17g},{d:.17g}" for lo, hi, d in zip(edges[:-1], edges[1:], density))
    return "\n".join(lines) + "\n"


def boxplot_data(samples) -> str:
    """Boxplot CSV ``min,q1,median,q3,max,outlier_count`` with 1.5 IQR whiskers."""
    samples = np.asarray(samples, dtype=float)
    if samples.size == 0:
        raise ValidationError("cannot build boxplot data from an empty sample set")
    q1, med, q3 = np.percentile(samples, [25.0, 50.0, 75.0])
    iqr = q3 - q1
    lo_fence, hi_fence = q1 - 1.5 * iqr, q3 + 1.5 * iqr
    inside = samples[(samples >= lo_fence) & (samples <= hi_fence)]
    outliers = samples.size - inside.size
    lines = [
        "min,q1,median,q3,max,outlier_count",
        f"{inside.min():.17g},{q1:.17g},{med:.17g},{q3:.17g},{inside.max():.17g},{outliers}",
    ]
    return "\n".join(lines) + "\n"


def report_to_csv(report: AccuracyReport) -> str:
    """CSV block ``t,mean_acc,mean_se,var_acc,var_se``."""
    lines = ["t,mean_acc,mean_se,var_acc,var_se"]
    for i, t in enumerate(report.at_times):
        lines.append(
            f"{t:.17g},{report.mean_accuracy[i]:.17g},{report.mean_se[i]:.17g},"
            f"{report.var_accuracy[i]:.17g},{report.var_se[i]:.17g}"
        )
    return "\n".join(lines) + "\n"
