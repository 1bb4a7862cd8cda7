"""CARMA model algebra: validation, eigenstructure, kernel, kernel integrals.

A CARMA(p_bar, q_bar) model is specified by autoregressive coefficients
a_1..a_{p_bar} and moving-average coefficients b_0..b_{q_bar} with the
leading b equal to one.  Validation requires all autoregressive roots to be
real, strictly negative and distinct, in which case the process decomposes
into p_bar coupled CAR(1) components with rates lambda_k (the roots) and
residues alpha_k = b(lambda_k) / a'(lambda_k).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import (
    CommonRootError,
    ComplexRootError,
    NonNegativeRootError,
    RepeatedRootError,
    ValidationError,
)

_IMAG_TOL = 1e-10
_GAP_TOL = 1e-8
_COMMON_ROOT_TOL = 1e-10


@dataclass(frozen=True)
class CarmaSpec:
    """Polynomial coefficients (a_1..a_p, b_0..b_q with b_q = 1)."""

    a: tuple[float, ...]
    b: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(float(v) for v in self.a))
        object.__setattr__(self, "b", tuple(float(v) for v in self.b))
        if len(self.a) < 1:
            raise ValidationError("autoregressive order must be at least 1")
        if not 1 <= len(self.b) <= len(self.a):
            raise ValidationError(
                f"moving-average order must satisfy q_bar <= p_bar - 1 "
                f"(got {len(self.b) - 1} vs p_bar={len(self.a)})"
            )
        if self.b[-1] != 1.0:
            raise ValidationError(f"leading moving-average coefficient must equal 1, got {self.b[-1]}")

    @property
    def p_bar(self) -> int:
        return len(self.a)

    @property
    def q_bar(self) -> int:
        return len(self.b) - 1

    def a_poly(self) -> np.polynomial.Polynomial:
        # a(z) = z^p + a_1 z^(p-1) + ... + a_p
        return np.polynomial.Polynomial(tuple(reversed(self.a)) + (1.0,))

    def b_poly(self) -> np.polynomial.Polynomial:
        return np.polynomial.Polynomial(self.b)


@dataclass(frozen=True, eq=False)
class CarmaDecomposition:
    """Rates (strictly negative, descending) and residues of the CAR(1) sum."""

    lambdas: np.ndarray
    residues: np.ndarray
    nonneg_kernel: bool = field(default=False)

    @property
    def p_bar(self) -> int:
        return self.lambdas.size


@lru_cache(maxsize=128)
def validate(spec: CarmaSpec) -> CarmaDecomposition:
    """Check the root conditions and return the CAR(1) decomposition.

    Roots come from the companion matrix, polished with one Newton step each;
    rejection thresholds are relative so large rates are not penalized.
    The result is cached per spec and must be treated as immutable.
    """
    a_poly = spec.a_poly()
    b_poly = spec.b_poly()
    roots = a_poly.roots()

    da = a_poly.deriv()
    polished = []
    for r in roots:
        d = da(r)
        if d != 0:
            r = r - a_poly(r) / d
        polished.append(r)
    roots = np.asarray(polished)

    for r in roots:
        if abs(r.imag) > _IMAG_TOL * (1.0 + abs(r)):
            raise ComplexRootError(f"autoregressive root {r:.12g} is not real", root=complex(r))
    lams = np.sort(roots.real)[::-1]

    for r in lams:
        if r >= 0:
            raise NonNegativeRootError(f"autoregressive root {r:.12g} is not strictly negative", root=float(r))
    scale = np.max(np.abs(lams))
    for i in range(len(lams) - 1):
        if abs(lams[i] - lams[i + 1]) <= _GAP_TOL * scale:
            raise RepeatedRootError(
                f"autoregressive roots {lams[i]:.12g} and {lams[i + 1]:.12g} coincide to tolerance",
                root=float(lams[i]),
            )
    for lam in lams:
        if abs(b_poly(lam)) <= _COMMON_ROOT_TOL * (1.0 + abs(lam)) ** spec.q_bar:
            raise CommonRootError(f"moving-average polynomial vanishes at root {lam:.12g}", root=float(lam))

    residues = np.atleast_1d(b_poly(lams) / da(lams)).astype(float)
    return CarmaDecomposition(
        lambdas=lams, residues=residues, nonneg_kernel=_kernel_nonnegative(lams, residues)
    )


def _kernel_nonnegative(lams: np.ndarray, residues: np.ndarray) -> bool:
    # Numerical check on a dense grid; no closed criterion exists.
    t = np.linspace(0.0, 20.0 / np.abs(lams).min(), 10_000)
    g = (residues * np.exp(lams * t[:, None])).sum(axis=1)
    return bool(np.min(g) >= -1e-12)


def kernel(decomp: CarmaDecomposition, t) -> float | np.ndarray:
    """Moving-average kernel g(t) = sum_k alpha_k exp(lambda_k t), zero for t < 0."""
    t = np.asarray(t, dtype=float)
    vals = np.where(
        t[..., None] >= 0,
        decomp.residues * np.exp(decomp.lambdas * t[..., None]),
        0.0,
    ).sum(axis=-1)
    return float(vals) if vals.ndim == 0 else vals


def kernel_integrals(decomp: CarmaDecomposition) -> tuple[float, float]:
    """Closed forms for int_0^inf g and int_0^inf g^2."""
    lam = decomp.lambdas
    res = decomp.residues
    int_g = float(np.sum(-res / lam))
    int_g2 = float(np.sum(-np.outer(res, res) / (lam[:, None] + lam[None, :])))
    return int_g, int_g2


def partial_kernel_integrals(decomp: CarmaDecomposition, s: float) -> tuple[float, float]:
    """Tail integrals int_s^inf g and int_s^inf g^2 for s >= 0."""
    if s < 0:
        raise ValidationError(f"tail integrals require s >= 0, got {s}")
    lam = decomp.lambdas
    res = decomp.residues
    tail_g = float(np.sum(-res * np.exp(lam * s) / lam))
    pair = lam[:, None] + lam[None, :]
    tail_g2 = float(np.sum(-np.outer(res, res) * np.exp(pair * s) / pair))
    return tail_g, tail_g2


def spec_from_config(config: dict) -> CarmaSpec:
    """Build a CarmaSpec from its JSON description {"a": [...], "b": [...]}."""
    if not isinstance(config, dict):
        raise ValidationError("carma config must be an object")
    unknown = set(config) - {"a", "b"}
    if unknown:
        raise ValidationError(f"unknown carma config keys: {sorted(unknown)}")
    if "a" not in config or "b" not in config:
        raise ValidationError("carma config requires both 'a' and 'b'")
    return CarmaSpec(a=tuple(config["a"]), b=tuple(config["b"]))
