"""First and second moments of the truncated jump measure, closed form and numeric.

The level-n truncated measure M_n is defined through its one-sided tails,

    M_n((x, inf)) = min(n*alpha*x^alpha/||sigma||, 1) * M((x, inf)),

so its moments are tail integrals, not density-weighted ones:

    int z M_n(dz)   = int_0^inf  M_n((z, inf)) dz          (per side)
    int z^2 M_n(dz) = int_0^inf 2 z M_n((z, inf)) dz.

Writing c = n*alpha/||sigma|| and z* = c^(-1/alpha) (the clip point), Fubini
reduces both to proper single integrals of the density m plus one tail value:

    m1_n = c/(alpha+1) * int_0^z* r^(alpha+1) m dr + int_z*^inf r m dr
           - alpha/(alpha+1) * z* * Mbar(z*)                          (*)
    m2_n = 2c/(alpha+2) * int_0^z* r^(alpha+2) m dr + int_z*^inf r^2 m dr
           - alpha/(alpha+2) * z*^2 * Mbar(z*)                        (**)

The closed forms below evaluate (*) and (**) exactly for the built-in
families; :func:`trunc_moments_numeric` evaluates the same integrals by
adaptive quadrature and serves as the independent oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import quad

from .errors import ConsistencyError, DomainError, QuadratureError
from .specfun import _digamma, _gamma_reflect, gamma, gamma_upper, expint, hyp2f1
from .tempering import PCTSParams, PGTSParams, PTSSParams, TemperingModel, levy_tail, make_pgts

_EULER_GAMMA = 0.5772156649015328606
_QUAD_OPTS = dict(epsabs=1e-14, epsrel=1e-10, limit=200)
_CROSS_CHECK_RTOL = 1e-8


@dataclass(frozen=True)
class TruncatedMoments:
    """Signed first / second moments of M_n and M, and the discarded-jump variance."""

    m1_n: float
    m2_n: float
    m1: float
    m2: float
    sigma_n_sq: float
    n: int


def _finish(m1_n, m2_n, m1, m2, n, sigma_n_sq=None) -> TruncatedMoments:
    if sigma_n_sq is None:
        sigma_n_sq = m2 - m2_n
    return TruncatedMoments(
        m1_n=float(m1_n),
        m2_n=float(m2_n),
        m1=float(m1),
        m2=float(m2),
        sigma_n_sq=float(max(sigma_n_sq, 0.0)),
        n=int(n),
    )


# ---------------------------------------------------------------------------
# exponentially tempered branches (ptss / pcts)


def _exp_branch_trunc(delta: float, lam: float, alpha: float, p: float, c: float) -> tuple[float, float]:
    # One-sided moments of the truncated exponential-tempering branch;
    # c = n*alpha/||sigma|| is shared between branches of a two-sided model.
    zstar = c ** (-1.0 / alpha)
    x = (lam * zstar) ** p
    m1 = (c * delta / (alpha + 1.0)) * (gamma(1.0 / p) - gamma_upper(1.0 / p, x)) / (p * lam)
    m1 += (delta * zstar ** (1.0 - alpha) / (p * (alpha + 1.0))) * (
        (alpha + 1.0) * expint((alpha + p - 1.0) / p, x) - alpha * expint(alpha / p + 1.0, x)
    )
    m2 = (2.0 * c * delta / ((alpha + 2.0) * p * lam**2)) * (gamma(2.0 / p) - gamma_upper(2.0 / p, x))
    m2 += (delta * zstar ** (2.0 - alpha) / (p * (alpha + 2.0))) * (
        (alpha + 2.0) * expint((p + alpha - 2.0) / p, x) - alpha * expint((p + alpha) / p, x)
    )
    return m1, m2


def _exp_branch_full(delta: float, lam: float, alpha: float, p: float) -> tuple[float, float]:
    # Full moments of one branch; the first moment diverges for alpha >= 1 and
    # is returned as its analytic continuation (nan exactly at the alpha=1 pole).
    m2 = delta * lam ** (alpha - 2.0) * gamma((2.0 - alpha) / p) / p
    if alpha < 1.0:
        m1 = delta * lam ** (alpha - 1.0) * gamma((1.0 - alpha) / p) / p
    elif alpha == 1.0:
        m1 = math.nan
    else:
        m1 = delta * lam ** (alpha - 1.0) * _gamma_reflect((1.0 - alpha) / p) / p
    return m1, m2


@lru_cache(maxsize=512)
def _ptss_cached(params: PTSSParams, n: int) -> TruncatedMoments:
    alpha, p = params.alpha, params.p
    c = n * alpha / params.delta
    m1_n, m2_n = _exp_branch_trunc(params.delta, params.lam, alpha, p, c)
    m1, m2 = _exp_branch_full(params.delta, params.lam, alpha, p)
    _cross_check_full_ptss(params)
    return _finish(m1_n, m2_n, m1, m2, n)


def trunc_moments_ptss(params: PTSSParams, n: int) -> TruncatedMoments:
    """Closed-form truncated moments for the exponentially tempered subordinator."""
    if n < 1:
        raise DomainError(f"truncation level must be >= 1, got {n}")
    return _ptss_cached(params, int(n))


@lru_cache(maxsize=512)
def _pcts_cached(params: PCTSParams, n: int) -> TruncatedMoments:
    alpha, p = params.alpha, params.p
    sigma = params.delta_plus + params.delta_minus
    c = n * alpha / sigma
    m1p, m2p = _exp_branch_trunc(params.delta_plus, params.lambda_plus, alpha, p, c)
    m1m, m2m = _exp_branch_trunc(params.delta_minus, params.lambda_minus, alpha, p, c)
    m1_n = m1p - m1m
    m2_n = m2p + m2m
    if params.symmetric:
        m1, m1_n = 0.0, 0.0
        m2 = 2.0 * _exp_branch_full(params.delta_plus, params.lambda_plus, alpha, p)[1]
    else:
        f1p, f2p = _exp_branch_full(params.delta_plus, params.lambda_plus, alpha, p)
        f1m, f2m = _exp_branch_full(params.delta_minus, params.lambda_minus, alpha, p)
        m1 = f1p - f1m
        m2 = f2p + f2m
    _cross_check_full_pcts(params)
    return _finish(m1_n, m2_n, m1, m2, n)


def trunc_moments_pcts(params: PCTSParams, n: int) -> TruncatedMoments:
    """Closed-form truncated moments for the two-sided classical tempering.

    The signed first moment is the positive-branch contribution minus the
    negative-branch one; for alpha >= 1 with asymmetric tails the full first
    moment is an analytic continuation (each branch integral diverges).
    """
    if n < 1:
        raise DomainError(f"truncation level must be >= 1, got {n}")
    return _pcts_cached(params, int(n))


# ---------------------------------------------------------------------------
# gamma-mixture tempering (pgts)


def _pgts_j(tau: float, s: float, ustar: float) -> float:
    # int_0^ustar u^(s-1) (1+u)^(-tau) du for s > 0
    return ustar**s / s * hyp2f1(tau, s, s + 1.0, -ustar)


def _pgts_k(sigma: float, tau: float, ustar: float) -> float:
    # int_ustar^inf u^(sigma-1) (1+u)^(-tau) du; integration by parts raises the
    # exponent until it is positive, where the complete-beta split applies.
    if sigma > 0:
        complete = gamma(sigma) * gamma(tau - sigma) / gamma(tau)
        return complete - _pgts_j(tau, sigma, ustar)
    if sigma == 0.0:
        # log case: substitute v = u/(1+u) and peel the harmonic part
        vstar = ustar / (1.0 + ustar)
        acc = -math.log(vstar) - _digamma(tau) - _EULER_GAMMA
        binom = 1.0
        for k in range(1, 200):
            binom *= (tau - k) / k
            term = (-1.0) ** (k + 1) * binom * vstar**k / k
            acc += term
            if abs(term) < 1e-17 * max(1.0, abs(acc)):
                break
        return acc
    return -(ustar**sigma) * (1.0 + ustar) ** (-tau) / sigma + (tau / sigma) * _pgts_k(sigma + 1.0, tau + 1.0, ustar)


@lru_cache(maxsize=512)
def _pgts_cached(params: PGTSParams, n: int) -> TruncatedMoments:
    alpha, p, beta, lam = params.alpha, params.p, params.beta, params.lam
    c = n * alpha  # ||sigma|| = 1
    zstar = c ** (-1.0 / alpha)
    ustar = zstar**p / lam
    tau = beta / p

    gamma_tau = gamma(tau)
    m1 = lam ** ((1.0 - alpha) / p) / p * gamma((1.0 - alpha) / p) * gamma((alpha + beta - 1.0) / p) / gamma_tau
    m2 = lam ** ((2.0 - alpha) / p) / p * gamma((2.0 - alpha) / p) * gamma((alpha + beta - 2.0) / p) / gamma_tau

    tail_star = lam ** (-alpha / p) / p * _pgts_k(-alpha / p, tau, ustar)
    i_a1 = lam ** (1.0 / p) / p * _pgts_j(tau, 1.0 / p, ustar)
    p_1 = lam ** ((1.0 - alpha) / p) / p * _pgts_j(tau, (1.0 - alpha) / p, ustar)
    m1_n = c / (alpha + 1.0) * i_a1 + (m1 - p_1) - alpha / (alpha + 1.0) * zstar * tail_star

    i_a2 = lam ** (2.0 / p) / p * _pgts_j(tau, 2.0 / p, ustar)
    p_2 = lam ** ((2.0 - alpha) / p) / p * _pgts_j(tau, (2.0 - alpha) / p, ustar)
    m2_n = 2.0 * c / (alpha + 2.0) * i_a2 + (m2 - p_2) - alpha / (alpha + 2.0) * zstar**2 * tail_star

    _cross_check_full_pgts(params)
    return _finish(m1_n, m2_n, m1, m2, n)


def trunc_moments_pgts(params: PGTSParams, n: int, *, on_unsupported: str = "raise") -> TruncatedMoments:
    """Closed-form truncated moments for the gamma-mixture tempering.

    Requires alpha + beta > 2 and beta not in {1, 2} (the remaining cases
    have no published closed form); pass ``on_unsupported="quadrature"`` to
    fall back to the numeric oracle there instead of raising.
    """
    if n < 1:
        raise DomainError(f"truncation level must be >= 1, got {n}")
    unsupported = params.beta in (1.0, 2.0) or params.alpha + params.beta <= 2.0
    if unsupported:
        if on_unsupported == "quadrature":
            return trunc_moments_numeric(make_pgts(params), n)
        raise DomainError(
            "closed forms require alpha + beta > 2 and beta not in {1, 2}; "
            "use on_unsupported='quadrature' to fall back to the numeric oracle"
        )
    return _pgts_cached(params, int(n))


# ---------------------------------------------------------------------------
# numeric oracle


def _quad(f, a, b, what):
    val, err = quad(f, a, b, **_QUAD_OPTS)
    if not math.isfinite(val):
        raise QuadratureError(f"quadrature failed for {what}", detail=f"value={val}, abserr={err}")
    return val


def _density_integral(model: TemperingModel, power: float, lo: float, hi: float, sgn: float) -> float:
    """int_lo^hi r^power * m(sgn*r) dr, lo = 0 allowed when power > alpha.

    The piece below 1 is integrated in log space; its depth is chosen from
    the near-origin decay exponent power - alpha so the omitted mass is below
    1e-16 relative (alpha within ~0.07 of the power is out of reach of
    float64 and rejected).
    """
    dens = model.levy_density
    rate = power - model.alpha

    def f(r):
        if r <= 0.0:
            return 0.0
        v = r**power * dens(sgn * r)
        # guard against overflow of the raw density at extreme log-space nodes,
        # where the true product is below 1e-16 of the integral anyway
        return v if math.isfinite(v) else 0.0

    total = 0.0
    top1 = min(hi, 1.0)
    if lo < top1:
        if lo <= 0.0:
            if rate < 0.07:
                raise QuadratureError(
                    f"moment integral with near-origin exponent {rate:.3g} is not "
                    "resolvable in double precision"
                )
            ylo = math.log(top1) - min(600.0, 37.0 / rate)
        else:
            ylo = math.log(lo)
        total += _quad(lambda y: f(math.exp(y)) * math.exp(y), ylo, math.log(top1), "moment(log-part)")
        lo = top1
    if lo < min(hi, 10.0):
        total += _quad(f, lo, min(hi, 10.0), "moment(mid)")
        lo = min(hi, 10.0)
    if lo < hi:
        total += _quad(f, lo, hi, "moment(far)")
    return total


def _numeric_side(model: TemperingModel, n: int, sgn: float) -> dict:
    alpha = model.alpha
    c = n * alpha / model.sigma_mass
    zstar = c ** (-1.0 / alpha)
    a1 = _density_integral(model, alpha + 1.0, 0.0, zstar, sgn)
    a2 = _density_integral(model, alpha + 2.0, 0.0, zstar, sgn)
    b1 = _density_integral(model, 1.0, zstar, math.inf, sgn)
    b2 = _density_integral(model, 2.0, zstar, math.inf, sgn)
    tail_star = levy_tail(model, zstar, "+" if sgn > 0 else "-")
    m1_n = c / (alpha + 1.0) * a1 + b1 - alpha / (alpha + 1.0) * zstar * tail_star
    m2_n = 2.0 * c / (alpha + 2.0) * a2 + b2 - alpha / (alpha + 2.0) * zstar**2 * tail_star
    head2 = _density_integral(model, 2.0, 0.0, zstar, sgn)
    m2 = head2 + b2
    # the B-piece cancels exactly in m2 - m2_n, leaving only near-origin terms
    sigma_sq = head2 - 2.0 * c / (alpha + 2.0) * a2 + alpha / (alpha + 2.0) * zstar**2 * tail_star
    if alpha < 1.0:
        m1 = _density_integral(model, 1.0, 0.0, zstar, sgn) + b1
    else:
        m1 = math.inf
    return dict(m1_n=m1_n, m2_n=m2_n, m1=m1, m2=m2, sigma_sq=sigma_sq)


def trunc_moments_numeric(model: TemperingModel, n: int) -> TruncatedMoments:
    """Adaptive-quadrature evaluation of the tail-defined truncated moments.

    Independent of the closed forms: only the density and its tails are
    integrated, through the Fubini identities (*) and (**) in the module
    docstring.  Serves as the oracle for all closed-form operations.
    """
    if n < 1:
        raise DomainError(f"truncation level must be >= 1, got {n}")
    pos = _numeric_side(model, n, 1.0)
    if model.is_subordinator:
        return _finish(pos["m1_n"], pos["m2_n"], pos["m1"], pos["m2"], n, sigma_n_sq=pos["sigma_sq"])
    neg = _numeric_side(model, n, -1.0)
    if model.is_symmetric:
        m1, m1_n = 0.0, 0.0
    elif model.alpha >= 1.0:
        m1, m1_n = math.nan, pos["m1_n"] - neg["m1_n"]
    else:
        m1, m1_n = pos["m1"] - neg["m1"], pos["m1_n"] - neg["m1_n"]
    return _finish(
        m1_n,
        pos["m2_n"] + neg["m2_n"],
        m1,
        pos["m2"] + neg["m2"],
        n,
        sigma_n_sq=pos["sigma_sq"] + neg["sigma_sq"],
    )


# ---------------------------------------------------------------------------
# construction-time cross-checks of the full-moment closed forms


def _check(closed: float, numeric: float, what: str) -> None:
    if not math.isclose(closed, numeric, rel_tol=_CROSS_CHECK_RTOL, abs_tol=1e-12):
        raise ConsistencyError(f"{what}: closed form {closed!r} disagrees with quadrature {numeric!r}")


@lru_cache(maxsize=256)
def _cross_check_full_ptss(params: PTSSParams) -> None:
    from .tempering import make_ptss

    model = make_ptss(params)
    m1, m2 = _exp_branch_full(params.delta, params.lam, params.alpha, params.p)
    _check(m1, _density_integral(model, 1.0, 0.0, math.inf, 1.0), "ptss m1")
    _check(m2, _density_integral(model, 2.0, 0.0, math.inf, 1.0), "ptss m2")


@lru_cache(maxsize=256)
def _cross_check_full_pcts(params: PCTSParams) -> None:
    from .tempering import make_pcts

    model = make_pcts(params)
    _, m2p = _exp_branch_full(params.delta_plus, params.lambda_plus, params.alpha, params.p)
    _, m2m = _exp_branch_full(params.delta_minus, params.lambda_minus, params.alpha, params.p)
    _check(m2p, _density_integral(model, 2.0, 0.0, math.inf, 1.0), "pcts m2(+)")
    _check(m2m, _density_integral(model, 2.0, 0.0, math.inf, -1.0), "pcts m2(-)")
    if params.alpha < 1.0 and not params.symmetric:
        m1p, _ = _exp_branch_full(params.delta_plus, params.lambda_plus, params.alpha, params.p)
        _check(m1p, _density_integral(model, 1.0, 0.0, math.inf, 1.0), "pcts m1(+)")


@lru_cache(maxsize=256)
def _cross_check_full_pgts(params: PGTSParams) -> None:
    model = make_pgts(params)
    gamma_tau = gamma(params.beta / params.p)
    m1 = (
        params.lam ** ((1.0 - params.alpha) / params.p)
        / params.p
        * gamma((1.0 - params.alpha) / params.p)
        * gamma((params.alpha + params.beta - 1.0) / params.p)
        / gamma_tau
    )
    m2 = (
        params.lam ** ((2.0 - params.alpha) / params.p)
        / params.p
        * gamma((2.0 - params.alpha) / params.p)
        * gamma((params.alpha + params.beta - 2.0) / params.p)
        / gamma_tau
    )
    _check(m1, _density_integral(model, 1.0, 0.0, math.inf, 1.0), "pgts m1")
    _check(m2, _density_integral(model, 2.0, 0.0, math.inf, 1.0), "pgts m2")


# ---------------------------------------------------------------------------
# dispatch and CSV


def for_model(model: TemperingModel, n: int) -> TruncatedMoments:
    """Truncated moments by the best available route for the given model."""
    params = model.params
    if isinstance(params, PTSSParams):
        return trunc_moments_ptss(params, n)
    if isinstance(params, PCTSParams):
        return trunc_moments_pcts(params, n)
    if isinstance(params, PGTSParams):
        return trunc_moments_pgts(params, n, on_unsupported="quadrature")
    return trunc_moments_numeric(model, n)


def moments_to_csv(rows: list[TruncatedMoments]) -> str:
    """CSV block ``n,m1_n,m2_n,m1,m2,sigma_n_sq`` with 12 significant digits."""
    lines = ["n,m1_n,m2_n,m1,m2,sigma_n_sq"]
    for m in rows:
        lines.append(
            f"{m.n},{m.m1_n:.12g},{m.m2_n:.12g},{m.m1:.12g},{m.m2:.12g},{m.sigma_n_sq:.12g}"
        )
    return "\n".join(lines) + "\n"
