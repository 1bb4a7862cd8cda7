"""Real-valued special functions used by the closed-form jump-measure moments.

Provides the complete and upper-incomplete gamma functions, the generalized
exponential integral E_m (any real order), the Gauss hypergeometric function
on the non-positive real axis, the Riemann zeta function (including the
analytically continued strip 0 < s < 1), and Pochhammer symbols.

All functions are pure: identical inputs give bitwise-identical outputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConvergenceError, DomainError

# Iteration controls. Module-level so downstream tolerances compose predictably;
# rebindable for experimentation, not read from the environment.
SERIES_TERM_TOL = 1e-16
MAX_TERMS = 10_000
CF_MAX_ITER = 10_000
EXPINT_X_SPLIT = 1.5  # series below, continued fraction at or above

_EULER_GAMMA = 0.5772156649015328606
# B_2 .. B_12, used by the Euler-Maclaurin zeta tail and the digamma asymptotic.
_BERNOULLI = (1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30, 5.0 / 66, -691.0 / 2730)


@dataclass(frozen=True)
class EvalResult:
    """A function value together with a conservative absolute-error estimate."""

    value: float
    est_abs_error: float


def gamma(s: float) -> float:
    """Complete gamma function for s > 0."""
    if not s > 0 or not math.isfinite(s):
        raise DomainError(f"gamma requires s > 0, got s={s}")
    return math.gamma(s)


def _gamma_upper_cf(s: float, x: float) -> EvalResult:
    # Modified Lentz continued fraction for Gamma(s, x), x >= s + 1.
    tiny = 1e-300
    b = x + 1.0 - s
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    delta = 0.0
    for i in range(1, CF_MAX_ITER):
        an = -i * (i - s)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < SERIES_TERM_TOL:
            break
    else:
        raise ConvergenceError("incomplete gamma continued fraction stalled", terms_used=CF_MAX_ITER)
    value = math.exp(-x + s * math.log(x)) * h
    return EvalResult(value, abs(value) * (abs(delta - 1.0) + 1e-15))


def gamma_upper_with_error(s: float, x: float) -> EvalResult:
    """Upper incomplete gamma Gamma(s, x) = int_x^inf t^(s-1) e^(-t) dt, s > 0, x >= 0."""
    if not s > 0 or not math.isfinite(s):
        raise DomainError(f"gamma_upper requires s > 0, got s={s}")
    if x < 0 or not math.isfinite(x):
        raise DomainError(f"gamma_upper requires x >= 0, got x={x}")
    if x == 0.0:
        return EvalResult(math.gamma(s), 0.0)
    if x < s + 1.0:
        # Gamma(s) - x^s e^-x * series; mild cancellation only near the switch point.
        term = 1.0 / s
        total = term
        sk = s
        for _ in range(MAX_TERMS):
            sk += 1.0
            term *= x / sk
            total += term
            if abs(term) < abs(total) * SERIES_TERM_TOL:
                break
        else:
            raise ConvergenceError(
                "incomplete gamma series stalled", terms_used=MAX_TERMS, last_term=term, partial_sum=total
            )
        lower = total * math.exp(-x + s * math.log(x))
        value = math.gamma(s) - lower
        return EvalResult(value, abs(lower) * 1e-15 + abs(value) * 1e-15)
    return _gamma_upper_cf(s, x)


def gamma_upper(s: float, x: float) -> float:
    """Upper incomplete gamma function; see :func:`gamma_upper_with_error`."""
    return gamma_upper_with_error(s, x).value


def _expint_cf(m: float, x: float) -> float:
    # Modified Lentz for E_m(x) = e^-x / (x+m - 1*m/(x+m+2 - 2(m+1)/(...))), m >= 0, x >= split.
    tiny = 1e-300
    b = x + m
    c = 1.0 / tiny
    d = 1.0 / b if b != 0.0 else 1.0 / tiny
    h = d
    for i in range(1, CF_MAX_ITER):
        a = -i * (m - 1.0 + i)
        b += 2.0
        d = b + a * d
        if abs(d) < tiny:
            d = tiny
        c = b + a / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = c * d
        h *= delta
        if abs(delta - 1.0) < SERIES_TERM_TOL:
            return math.exp(-x) * h
    raise ConvergenceError("exponential integral continued fraction stalled", terms_used=CF_MAX_ITER)


def _expint_series_noninteger(m: float, x: float) -> float:
    # E_m(x) = Gamma(1-m) x^(m-1) - sum_k (-x)^k / (k! (k+1-m)); m not an integer, x < split.
    head = math.gamma(1.0 - m) * x ** (m - 1.0)
    term = 1.0
    acc = 0.0
    for k in range(MAX_TERMS):
        acc += term / (k + 1.0 - m)
        term *= -x / (k + 1.0)
        if abs(term) < SERIES_TERM_TOL * max(1.0, abs(acc)):
            return head - acc
    raise ConvergenceError("exponential integral series stalled", terms_used=MAX_TERMS, last_term=term)


def _expint_series_integer(n: int, x: float) -> float:
    # Log-form series for integer order n >= 1, x < split (Abramowitz & Stegun 5.1.12).
    psi_n = -_EULER_GAMMA + sum(1.0 / i for i in range(1, n))
    head = (-x) ** (n - 1) / math.factorial(n - 1) * (psi_n - math.log(x))
    term = 1.0
    acc = 0.0
    for k in range(MAX_TERMS):
        if k != n - 1:
            acc += term / (k + 1.0 - n)
        term *= -x / (k + 1.0)
        if abs(term) < SERIES_TERM_TOL * max(1.0, abs(acc)):
            return head - acc
    raise ConvergenceError("exponential integral series stalled", terms_used=MAX_TERMS, last_term=term)


def _expint_quadrature(m: float, x: float) -> float:
    # Fallback for near-integer orders where both series branches cancel badly:
    # E_m(x) = (e^-x / x) * int_0^inf e^-s (1 + s/x)^(-m) ds.
    from scipy.integrate import quad

    val, err = quad(lambda s: math.exp(-s) * (1.0 + s / x) ** (-m), 0.0, math.inf, epsabs=1e-14, epsrel=1e-12, limit=200)
    return math.exp(-x) / x * val


def _expint_nonneg(m: float, x: float) -> float:
    # dispatch for m >= 0, x > 0
    if x >= EXPINT_X_SPLIT:
        return _expint_cf(m, x)
    if m == 0.0:
        return math.exp(-x) / x
    nearest = round(m)
    if m == nearest:
        return _expint_series_integer(int(nearest), x)
    if nearest >= 1 and abs(m - nearest) < 1e-8:
        return _expint_quadrature(m, x)
    return _expint_series_noninteger(m, x)


def expint(m: float, x: float) -> float:
    """Generalized exponential integral E_m(x) = int_1^inf e^(-x t) t^(-m) dt.

    Defined for any real order m when x > 0, and for x = 0 when m > 1
    (E_m(0) = 1/(m-1)).  Orders m <= 0 are reached by the downward recurrence
    E_m(x) = (e^-x - m E_{m+1}(x)) / x, which is subtraction-free there.
    """
    if not (math.isfinite(m) and math.isfinite(x)):
        raise DomainError(f"expint requires finite arguments, got m={m}, x={x}")
    if x < 0:
        raise DomainError(f"expint requires x >= 0, got x={x}")
    if x == 0.0:
        if m > 1.0:
            return 1.0 / (m - 1.0)
        raise DomainError(f"expint at x=0 requires m > 1, got m={m}")
    if m >= 0.0:
        return _expint_nonneg(m, x)
    k = math.ceil(-m)
    base = m + k
    ex = math.exp(-x)
    val = ex / x if base == 0.0 else _expint_nonneg(base, x)
    order = base
    for _ in range(k):
        order -= 1.0
        val = (ex - order * val) / x
    return val


def expint_with_error(m: float, x: float) -> EvalResult:
    """E_m(x) with a crude error estimate (terminal tolerance times magnitude)."""
    value = expint(m, x)
    return EvalResult(value, abs(value) * 1e-13)


def hyp2f1_with_error(a: float, b: float, c: float, x: float) -> EvalResult:
    """Gauss hypergeometric 2F1(a, b; c; x) for x <= 0.

    The Pfaff transformation maps x <= 0 to y = x/(x-1) in [0, 1), where the
    Gauss series converges; (a, b) are sorted first so the argument symmetry
    2F1(a,b;c;x) = 2F1(b,a;c;x) holds bitwise.
    """
    for name, v in (("a", a), ("b", b), ("c", c), ("x", x)):
        if not math.isfinite(v):
            raise DomainError(f"hyp2f1 argument {name} must be finite, got {v}")
    if c <= 0 and c == round(c):
        raise DomainError(f"hyp2f1 requires c not a non-positive integer, got c={c}")
    if x > 0:
        raise DomainError(f"hyp2f1 is implemented for x <= 0 only, got x={x}")
    if x == 0.0:
        return EvalResult(1.0, 0.0)
    if a > b:
        a, b = b, a
    y = x / (x - 1.0)
    aa, bb = a, c - b
    term = 1.0
    total = 1.0
    small_streak = 0
    for k in range(MAX_TERMS):
        term *= (aa + k) * (bb + k) / ((c + k) * (k + 1.0)) * y
        total += term
        if abs(term) <= SERIES_TERM_TOL * abs(total):
            small_streak += 1
            if small_streak >= 2:
                value = (1.0 - x) ** (-a) * total
                return EvalResult(value, abs(value) * (abs(term / total) + 1e-15))
        else:
            small_streak = 0
    raise ConvergenceError(
        f"hypergeometric series did not converge for (a={a}, b={b}, c={c}, x={x})",
        terms_used=MAX_TERMS,
        last_term=term,
        partial_sum=total,
    )


def hyp2f1(a: float, b: float, c: float, x: float) -> float:
    """Gauss hypergeometric function on x <= 0; see :func:`hyp2f1_with_error`."""
    return hyp2f1_with_error(a, b, c, x).value


def zeta_with_error(s: float) -> EvalResult:
    """Riemann zeta for s > 0, s != 1, via Euler-Maclaurin with N=20 and B_2..B_12.

    Valid on the continued strip 0 < s < 1 as well; the truncation error is
    bounded by the first omitted Bernoulli correction.
    """
    if not math.isfinite(s) or s <= 0:
        raise DomainError(f"zeta requires s > 0, got s={s}")
    if s == 1.0:
        raise DomainError("zeta has a pole at s=1")
    n = 20
    total = sum(k ** (-s) for k in range(1, n))
    total += n ** (1.0 - s) / (s - 1.0) + 0.5 * n ** (-s)
    poch = s  # (s)_{2j-1}, built incrementally
    npow = n ** (-s - 1.0)
    correction = 0.0
    fact = 1.0
    for j, b2j in enumerate(_BERNOULLI, start=1):
        fact *= (2 * j) * (2 * j - 1)
        correction += b2j / fact * poch * npow
        poch *= (s + 2 * j - 1) * (s + 2 * j)
        npow /= n * n
    # first omitted term: B_14/(14)! * (s)_13 * n^(-s-13), B_14 = 7/6
    err = abs(7.0 / 6.0 / math.factorial(14) * poch * npow)
    return EvalResult(total + correction, err + 1e-15 * abs(total))


def zeta(s: float) -> float:
    """Riemann zeta function for s > 0, s != 1."""
    return zeta_with_error(s).value


def pochhammer(q: float, j: int) -> float:
    """Rising factorial (q)_j = q (q+1) ... (q+j-1); (q)_0 = 1.

    Overflow is reported as an infinite value (flagged with an infinite error
    estimate by :func:`pochhammer_with_error`) rather than an exception.
    """
    if j < 0 or j != int(j):
        raise DomainError(f"pochhammer requires integer j >= 0, got j={j}")
    value = 1.0
    for i in range(int(j)):
        value *= q + i
    return value


def pochhammer_with_error(q: float, j: int) -> EvalResult:
    value = pochhammer(q, j)
    if math.isinf(value):
        return EvalResult(value, math.inf)
    return EvalResult(value, abs(value) * 1e-15 * max(j, 1))


def _digamma(x: float) -> float:
    # psi(x) for x > 0: shift to x >= 10, then the Bernoulli asymptotic series.
    if x <= 0:
        raise DomainError(f"digamma helper requires x > 0, got x={x}")
    acc = 0.0
    while x < 10.0:
        acc -= 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    tail = 0.0
    power = inv2
    for j, b2j in enumerate(_BERNOULLI, start=1):
        tail += b2j / (2 * j) * power
        power *= inv2
    return acc + math.log(x) - 0.5 / x - tail


def _gamma_reflect(s: float) -> float:
    # Gamma at negative non-integer arguments via reflection; internal use only
    # (analytic continuation of one-sided first moments for alpha >= 1).
    if s > 0:
        return math.gamma(s)
    if s == round(s):
        raise DomainError(f"gamma pole at non-positive integer s={s}")
    return math.pi / (math.sin(math.pi * s) * math.gamma(1.0 - s))
