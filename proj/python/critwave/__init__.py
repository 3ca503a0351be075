"""Energy-damped quintic wave simulator (C++ core)."""

from ._core import (
    ConfigError,
    HashMismatch,
    SimulationError,
    bootstrap_trap,
    canonical_config,
    config_hash,
    cutoff_profile,
    damped_kinetic,
    decay_fit,
    exact_quintic_projection,
    linear_lower_bound,
    multiplier_suite,
    nakao_envelope,
    oracle_check,
    quintic_projection,
    run_simulate,
    simulate,
)

__all__ = [
    "ConfigError",
    "HashMismatch",
    "SimulationError",
    "bootstrap_trap",
    "canonical_config",
    "config_hash",
    "cutoff_profile",
    "damped_kinetic",
    "decay_fit",
    "exact_quintic_projection",
    "linear_lower_bound",
    "multiplier_suite",
    "nakao_envelope",
    "oracle_check",
    "quintic_projection",
    "run_simulate",
    "simulate",
]
