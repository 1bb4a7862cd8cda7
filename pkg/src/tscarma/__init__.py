"""Simulation of CARMA processes driven by p-tempered alpha-stable Levy noise."""

from .carma import CarmaDecomposition, CarmaSpec, kernel, kernel_integrals, partial_kernel_integrals, validate
from .carmasim import (
    ErrorBound,
    SampledPath,
    discarded_component_stats,
    error_bound,
    gaussian_carma,
    simulate_general_path,
    simulate_subordinator_path,
    stationary_moments,
)
from .levyseries import JumpSkeleton, SeriesConfig, h_value, sample_skeleton, sample_unit_increments, truncated_tail
from .mcharness import AccuracyReport, emit_density_data, run_accuracy_experiment, run_iid_experiment
from .moments import (
    TruncatedMoments,
    trunc_moments_numeric,
    trunc_moments_pcts,
    trunc_moments_pgts,
    trunc_moments_ptss,
)
from .tempering import (
    PCTSParams,
    PGTSParams,
    PTSSParams,
    StabilityPair,
    TemperingModel,
    levy_tail,
    make_custom,
    make_pcts,
    make_pgts,
    make_ptss,
    model_from_config,
    rosinski_functionals,
)

__version__ = "0.1.0"

__all__ = [
    "AccuracyReport",
    "CarmaDecomposition",
    "CarmaSpec",
    "ErrorBound",
    "JumpSkeleton",
    "PCTSParams",
    "PGTSParams",
    "PTSSParams",
    "SampledPath",
    "SeriesConfig",
    "StabilityPair",
    "TemperingModel",
    "TruncatedMoments",
    "discarded_component_stats",
    "emit_density_data",
    "error_bound",
    "gaussian_carma",
    "h_value",
    "kernel",
    "kernel_integrals",
    "levy_tail",
    "make_custom",
    "make_pcts",
    "make_pgts",
    "make_ptss",
    "model_from_config",
    "partial_kernel_integrals",
    "rosinski_functionals",
    "run_accuracy_experiment",
    "run_iid_experiment",
    "sample_skeleton",
    "sample_unit_increments",
    "simulate_general_path",
    "simulate_subordinator_path",
    "stationary_moments",
    "trunc_moments_numeric",
    "trunc_moments_pcts",
    "trunc_moments_pgts",
    "trunc_moments_ptss",
    "truncated_tail",
    "validate",
]
