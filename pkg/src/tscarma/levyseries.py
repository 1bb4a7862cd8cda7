"""Truncated shot-noise series for the driving jumps.

The generator draws a Poisson number of jump candidates on a window
(-lookback, horizon], places each at a uniform time, and sizes it through
the clipped inverse-intensity map

    size = sign(V) * min(Lambda^(-1/alpha), E^(1/p) U^(1/alpha) / |V|^(1/p)),

where Lambda are the ascending order statistics of uniforms on
(0, alpha*n/||sigma||).  The retained jumps form a compound Poisson process
whose jump measure has one-sided tails

    min(n * alpha * x^alpha / ||sigma||, 1) * (full tail beyond x).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, UnsupportedError, ValidationError
from .streams import stream
from .tempering import TemperingModel, levy_tail


@dataclass(frozen=True)
class SeriesConfig:
    """Window, truncation level and stream identity of one skeleton draw."""

    horizon: float
    lookback: float
    truncation: int
    seed: int
    stream_index: int = 0

    def __post_init__(self):
        if not self.horizon > 0:
            raise ValidationError(f"horizon must be positive, got {self.horizon}")
        if self.lookback < 0:
            raise ValidationError(f"lookback must be non-negative, got {self.lookback}")
        if self.truncation < 1:
            raise ValidationError(f"truncation level must be >= 1, got {self.truncation}")
        if self.seed < 0 or self.stream_index < 0:
            raise ValidationError("seed and stream_index must be non-negative")


@dataclass(frozen=True, eq=False)
class JumpSkeleton:
    """Jump times and signed sizes on (-lookback, horizon], sorted by time."""

    times: np.ndarray
    sizes: np.ndarray
    config: SeriesConfig
    model_name: str
    alpha: float = field(default=float("nan"))
    lambda_min: float = field(default=math.inf)
    count_drawn: int = field(default=0)  # Poisson count before denormal dropping

    def __post_init__(self):
        if self.times.shape != self.sizes.shape:
            raise ValidationError("times and sizes must have equal length")

    def __len__(self) -> int:
        return self.times.size

    def size_bound(self) -> float:
        """Upper bound on |size| implied by the smallest generated intensity mark."""
        if not np.isfinite(self.lambda_min) or self.lambda_min <= 0:
            return math.inf
        return self.lambda_min ** (-1.0 / self.alpha)


def h_value(model: TemperingModel, gamma_scaled: float, e: float, u: float, v: float) -> float:
    """Single jump size for scaled intensity mark ``gamma_scaled`` and marks (e, u, v).

    ``gamma_scaled`` must already include the alpha*Gamma/(||sigma||*window)
    rescaling, so the first branch of the minimum is gamma_scaled^(-1/alpha).
    """
    if not gamma_scaled > 0:
        raise DomainError(f"gamma_scaled must be positive, got {gamma_scaled}")
    if not e > 0:
        raise DomainError(f"e must be positive, got {e}")
    if not 0 < u < 1:
        raise DomainError(f"u must lie in (0, 1), got {u}")
    if v == 0:
        raise DomainError("v must be non-zero")
    alpha, p = model.alpha, model.p
    mag = min(gamma_scaled ** (-1.0 / alpha), e ** (1.0 / p) * u ** (1.0 / alpha) / abs(v) ** (1.0 / p))
    return math.copysign(mag, v)


def _h_sizes(alpha: float, p: float, lam: np.ndarray, e: np.ndarray, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    mag = np.minimum(lam ** (-1.0 / alpha), e ** (1.0 / p) * u ** (1.0 / alpha) / np.abs(v) ** (1.0 / p))
    return np.copysign(mag, v)


def _require_supported(model: TemperingModel, allow_case_ii: bool) -> None:
    if model.alpha >= 1.0 and not model.is_symmetric and not allow_case_ii:
        raise UnsupportedError(
            "alpha >= 1 with an asymmetric mixing law needs the centered series; "
            "pass allow_case_ii=True to opt in to the documented interpretation"
        )


def sample_skeleton(model: TemperingModel, config: SeriesConfig, *, allow_case_ii: bool = False) -> JumpSkeleton:
    """Draw one jump skeleton; identical (model, config) reproduce it bit-for-bit."""
    _require_supported(model, allow_case_ii)
    rng = stream(config.seed, config.stream_index)
    window = config.horizon + config.lookback
    alpha, p = model.alpha, model.p
    z = int(rng.poisson(window * config.truncation))
    lam_cap = alpha * config.truncation / model.sigma_mass
    lam = np.sort(rng.uniform(0.0, lam_cap, size=z))
    t = rng.uniform(-config.lookback, config.horizon, size=z)
    e = rng.exponential(1.0, size=z)
    u = rng.uniform(0.0, 1.0, size=z)
    v = np.asarray(model.v_sampler(rng, z), dtype=float)

    sizes = _h_sizes(alpha, p, lam, e, u, v) if z else np.empty(0)
    keep = np.abs(sizes) > 1e-300  # drop denormal-scale jumps
    sizes, t = sizes[keep], t[keep]
    order = np.argsort(t)  # ties have probability zero, stability is irrelevant
    return JumpSkeleton(
        times=t[order],
        sizes=sizes[order],
        config=config,
        model_name=model.name,
        alpha=alpha,
        lambda_min=float(lam[0]) if z else math.inf,
        count_drawn=z,
    )


def truncated_tail(model: TemperingModel, n: int, x: float, side: str = "+") -> float:
    """Tail of the level-n truncated jump measure beyond x > 0 on one side."""
    if n < 1:
        raise DomainError(f"truncation level must be >= 1, got {n}")
    if not x > 0:
        raise DomainError(f"x must be positive, got {x}")
    clip = min(n * model.alpha * x**model.alpha / model.sigma_mass, 1.0)
    return clip * levy_tail(model, x, side)


def sample_unit_increments(
    model: TemperingModel,
    n: int,
    count: int,
    seed: int,
    stream_index: int = 0,
    *,
    batch: int = 4096,
) -> np.ndarray:
    """Vectorized i.i.d. draws of the unit-time truncated increment (window (0, 1]).

    Jump times are immaterial for a single increment, so only counts, marks
    and sizes are drawn; per-replication sums use segmented reduction.
    """
    _require_supported(model, allow_case_ii=False)
    if count < 1:
        raise ValidationError(f"count must be >= 1, got {count}")
    rng = stream(seed, stream_index)
    alpha, p = model.alpha, model.p
    lam_cap = alpha * n / model.sigma_mass
    out = np.empty(count)
    done = 0
    while done < count:
        m = min(batch, count - done)
        z = rng.poisson(float(n), size=m)
        total = int(z.sum())
        lam = rng.uniform(0.0, lam_cap, size=total)
        e = rng.exponential(1.0, size=total)
        u = rng.uniform(0.0, 1.0, size=total)
        v = np.asarray(model.v_sampler(rng, total), dtype=float)
        sizes = _h_sizes(alpha, p, lam, e, u, v)
        offsets = np.zeros(m, dtype=np.int64)
        np.cumsum(z[:-1], out=offsets[1:])
        sums = np.add.reduceat(sizes, offsets) if total else np.zeros(m)
        sums[z == 0] = 0.0  # reduceat repeats the previous segment on empty ones
        out[done : done + m] = sums
        done += m
    return out


def skeleton_to_csv(skeleton: JumpSkeleton) -> str:
    """Debug dump: header ``time,size``, 17 significant digits, sorted by time."""
    lines = ["time,size"]
    lines.extend(f"{t:.17g},{s:.17g}" for t, s in zip(skeleton.times, skeleton.sizes))
    return "\n".join(lines) + "\n"
