"""Tempered-stable driving noise models.

A model bundles the stability pair (alpha, p), the total spherical mass
||sigma||, the one-dimensional jump-intensity density, and a sampler for the
mixing variable V distributed as Q/||sigma||.  Three families are built in:

* ``ptss``  -- one-sided exponentially tempered subordinator, alpha in (0,1);
* ``pcts``  -- two-sided classical tempering with separate tail weights;
* ``pgts``  -- one-sided gamma-mixture tempering, alpha in (0,1).

Custom models may be registered with :func:`make_custom`; complete
monotonicity of the implied tempering function is the caller's
responsibility and is not verified.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import partial
from typing import Callable

import numpy as np
from scipy.integrate import quad

from .errors import DomainError, QuadratureError, UnsupportedError, ValidationError
from .specfun import _gamma_reflect

_QUAD_OPTS = dict(epsabs=0.0, epsrel=1e-11, limit=200)


@dataclass(frozen=True)
class StabilityPair:
    """Stability index alpha in (0,2) and tempering exponent p > 0."""

    alpha: float
    p: float

    def __post_init__(self):
        if not 0.0 < self.alpha < 2.0:
            raise ValidationError(f"alpha must lie in (0, 2), got {self.alpha}")
        if not self.p > 0.0:
            raise ValidationError(f"p must be positive, got {self.p}")


@dataclass(frozen=True)
class PTSSParams:
    alpha: float
    p: float
    delta: float
    lam: float

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValidationError(f"subordinator stability requires alpha in (0, 1), got {self.alpha}")
        for name in ("p", "delta", "lam"):
            if not getattr(self, name) > 0.0:
                raise ValidationError(f"{name} must be positive, got {getattr(self, name)}")


@dataclass(frozen=True)
class PCTSParams:
    alpha: float
    p: float
    delta_plus: float
    delta_minus: float
    lambda_plus: float
    lambda_minus: float

    def __post_init__(self):
        if not 0.0 < self.alpha < 2.0:
            raise ValidationError(f"alpha must lie in (0, 2), got {self.alpha}")
        for name in ("p", "delta_plus", "delta_minus", "lambda_plus", "lambda_minus"):
            if not getattr(self, name) > 0.0:
                raise ValidationError(f"{name} must be positive, got {getattr(self, name)}")

    @property
    def symmetric(self) -> bool:
        return self.delta_plus == self.delta_minus and self.lambda_plus == self.lambda_minus


@dataclass(frozen=True)
class PGTSParams:
    alpha: float
    p: float
    beta: float
    lam: float

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValidationError(f"subordinator stability requires alpha in (0, 1), got {self.alpha}")
        for name in ("p", "beta", "lam"):
            if not getattr(self, name) > 0.0:
                raise ValidationError(f"{name} must be positive, got {getattr(self, name)}")


@dataclass(frozen=True)
class TemperingModel:
    """Immutable description of a tempered-stable driving process.

    ``levy_density`` maps z != 0 to the jump-intensity density m(z).
    ``v_sampler`` takes (generator, size) and returns draws of V ~ Q/||sigma||;
    the model object itself holds no random state.
    """

    stability: StabilityPair
    sigma_mass: float
    levy_density: Callable[[np.ndarray], np.ndarray]
    v_sampler: Callable[[np.random.Generator, int], np.ndarray]
    is_subordinator: bool
    is_symmetric: bool
    name: str
    params: object = None

    @property
    def alpha(self) -> float:
        return self.stability.alpha

    @property
    def p(self) -> float:
        return self.stability.p


# Density and sampler kernels are module-level so models pickle for
# process-based Monte Carlo workers.

def _ptss_density(params: PTSSParams, z):
    z = np.asarray(z, dtype=float)
    out = np.zeros_like(z)
    pos = z > 0
    zp = z[pos]
    out[pos] = params.delta * np.exp(-((params.lam * zp) ** params.p)) * zp ** (-1.0 - params.alpha)
    return out if out.ndim else float(out)


def _ptss_v(params: PTSSParams, rng: np.random.Generator, size: int):
    return np.full(size, params.lam**params.p)


def _pcts_density(params: PCTSParams, z):
    z = np.asarray(z, dtype=float)
    out = np.zeros_like(z)
    pos = z > 0
    neg = z < 0
    zp = z[pos]
    zn = -z[neg]
    out[pos] = params.delta_plus * np.exp(-((params.lambda_plus * zp) ** params.p)) * zp ** (-1.0 - params.alpha)
    out[neg] = params.delta_minus * np.exp(-((params.lambda_minus * zn) ** params.p)) * zn ** (-1.0 - params.alpha)
    return out if out.ndim else float(out)


def _pcts_v(params: PCTSParams, rng: np.random.Generator, size: int):
    p_plus = params.delta_plus / (params.delta_plus + params.delta_minus)
    positive = rng.random(size) < p_plus
    return np.where(positive, params.lambda_plus**params.p, -(params.lambda_minus**params.p))


def _pgts_density(params: PGTSParams, z):
    z = np.asarray(z, dtype=float)
    out = np.zeros_like(z)
    pos = z > 0
    zp = z[pos]
    out[pos] = (zp**params.p / params.lam + 1.0) ** (-params.beta / params.p) * zp ** (-1.0 - params.alpha)
    return out if out.ndim else float(out)


def _pgts_v(params: PGTSParams, rng: np.random.Generator, size: int):
    return rng.gamma(shape=params.beta / params.p, scale=1.0 / params.lam, size=size)


def make_ptss(params: PTSSParams) -> TemperingModel:
    """One-sided exponentially tempered subordinator model.

    The mixing law Q is a point mass at lam**p (the Laplace exponent of the
    tempering factor exp(-(lam z)^p) in the variable z^p), so V is constant.
    """
    return TemperingModel(
        stability=StabilityPair(params.alpha, params.p),
        sigma_mass=params.delta,
        levy_density=partial(_ptss_density, params),
        v_sampler=partial(_ptss_v, params),
        is_subordinator=True,
        is_symmetric=False,
        name="ptss",
        params=params,
    )


def make_pcts(params: PCTSParams) -> TemperingModel:
    """Two-sided classical tempering; V = +lambda_plus^p or -lambda_minus^p
    with probabilities proportional to the tail weights."""
    return TemperingModel(
        stability=StabilityPair(params.alpha, params.p),
        sigma_mass=params.delta_plus + params.delta_minus,
        levy_density=partial(_pcts_density, params),
        v_sampler=partial(_pcts_v, params),
        is_subordinator=False,
        is_symmetric=params.symmetric,
        name="pcts",
        params=params,
    )


def make_pgts(params: PGTSParams) -> TemperingModel:
    """One-sided gamma-mixture tempering; V is gamma(beta/p, rate lam) and
    the spherical mass is 1."""
    return TemperingModel(
        stability=StabilityPair(params.alpha, params.p),
        sigma_mass=1.0,
        levy_density=partial(_pgts_density, params),
        v_sampler=partial(_pgts_v, params),
        is_subordinator=True,
        is_symmetric=False,
        name="pgts",
        params=params,
    )


def make_custom(
    alpha: float,
    p: float,
    sigma_mass: float,
    levy_density: Callable,
    v_sampler: Callable,
    *,
    is_subordinator: bool = False,
    is_symmetric: bool = False,
    name: str = "custom",
) -> TemperingModel:
    """Register a user-supplied model; callables must be picklable for
    multi-process Monte Carlo."""
    if not sigma_mass > 0:
        raise ValidationError(f"sigma_mass must be positive, got {sigma_mass}")
    if is_subordinator and alpha >= 1.0:
        raise ValidationError("a subordinator requires alpha < 1")
    return TemperingModel(
        stability=StabilityPair(alpha, p),
        sigma_mass=sigma_mass,
        levy_density=levy_density,
        v_sampler=v_sampler,
        is_subordinator=is_subordinator,
        is_symmetric=is_symmetric,
        name=name,
        params=None,
    )


def _quad_checked(f, a, b, what):
    val, err = quad(f, a, b, **_QUAD_OPTS)
    if not math.isfinite(val) or (abs(val) > 0 and err > 1e-7 * abs(val) + 1e-13):
        raise QuadratureError(f"quadrature failed for {what} on ({a}, {b})", detail=f"value={val}, abserr={err}")
    return val


def levy_tail(model: TemperingModel, x: float, side: str = "+") -> float:
    """One-sided tail mass of the jump measure beyond x > 0.

    Integrates the density over (x, inf) for side "+" or (-inf, -x) for "-",
    in log space near the origin (the density has a |z|^(-1-alpha)
    singularity) and directly on the exponential/power tail.
    """
    if not x > 0:
        raise DomainError(f"levy_tail requires x > 0, got x={x}")
    if side not in ("+", "-"):
        raise DomainError(f"side must be '+' or '-', got {side!r}")
    sgn = 1.0 if side == "+" else -1.0
    dens = model.levy_density

    total = 0.0
    lo = x
    if x < 1.0:
        # z = e^y flattens the steep power ramp on (x, 1)
        total += _quad_checked(lambda y: dens(sgn * math.exp(y)) * math.exp(y), math.log(x), 0.0, "tail(log-part)")
        lo = 1.0
    mid = max(lo, 10.0)
    if lo < 10.0:
        total += _quad_checked(lambda z: dens(sgn * z), lo, 10.0, "tail(mid)")
    total += _quad_checked(lambda z: dens(sgn * z), mid, math.inf, "tail(far)")
    return total


def rosinski_functionals(model: TemperingModel) -> tuple[float, float]:
    """Directional mean x0 of the spherical measure and the signed moment
    x1 = int sign(v) |v|^((alpha-1)/p) Q(dv), in closed form per family."""
    params = model.params
    alpha, p = model.alpha, model.p
    if isinstance(params, PTSSParams):
        return 1.0, params.delta * (params.lam**params.p) ** ((alpha - 1.0) / p)
    if isinstance(params, PCTSParams):
        x0 = (params.delta_plus - params.delta_minus) / model.sigma_mass
        if params.symmetric:
            return 0.0, 0.0
        x1 = params.delta_plus * params.lambda_plus ** (alpha - 1.0) - params.delta_minus * params.lambda_minus ** (
            alpha - 1.0
        )
        return x0, x1
    if isinstance(params, PGTSParams):
        # gamma-law moment E[V^((alpha-1)/p)] scaled by ||sigma|| = 1
        c = (alpha - 1.0) / p
        k = params.beta / p
        x1 = math.gamma(k + c) / math.gamma(k) * params.lam ** (-c)
        return 1.0, x1
    raise UnsupportedError("rosinski_functionals requires a built-in model with a known mixing law Q")


def _log_moment_r(model: TemperingModel) -> float:
    # int w log|w| R(dw) for built-ins with discrete Q; needed only by the
    # alpha = 1 centering of the gated asymmetric branch.
    params = model.params
    alpha, p = model.alpha, model.p
    if isinstance(params, PTSSParams):
        w = 1.0 / params.lam
        return params.delta * params.lam**alpha * w * math.log(w)
    if isinstance(params, PCTSParams):
        wp = 1.0 / params.lambda_plus
        wm = 1.0 / params.lambda_minus
        return (
            params.delta_plus * params.lambda_plus**alpha * wp * math.log(wp)
            - params.delta_minus * params.lambda_minus**alpha * wm * math.log(wm)
        )
    raise UnsupportedError("log-moment of the Rosinski measure is available for discrete mixing laws only")


def model_from_config(config: dict) -> TemperingModel:
    """Build a built-in model from its JSON description.

    Expected shape: {"family": "ptss"|"pcts"|"pgts", "alpha": ..., "p": ...,
    plus the family-specific parameter fields}.  Unknown keys are rejected.
    """
    if not isinstance(config, dict):
        raise ValidationError("model config must be an object")
    family = config.get("family")
    fields = {
        "ptss": ("alpha", "p", "delta", "lam"),
        "pcts": ("alpha", "p", "delta_plus", "delta_minus", "lambda_plus", "lambda_minus"),
        "pgts": ("alpha", "p", "beta", "lam"),
    }
    if family not in fields:
        raise ValidationError(f"unknown model family {family!r}; expected one of {sorted(fields)}")
    expected = set(fields[family]) | {"family"}
    unknown = set(config) - expected
    if unknown:
        raise ValidationError(f"unknown model config keys: {sorted(unknown)}")
    missing = expected - set(config)
    if missing:
        raise ValidationError(f"missing model config keys: {sorted(missing)}")
    kwargs = {k: float(config[k]) for k in fields[family]}
    if family == "ptss":
        return make_ptss(PTSSParams(**kwargs))
    if family == "pcts":
        return make_pcts(PCTSParams(**kwargs))
    return make_pgts(PGTSParams(**kwargs))
