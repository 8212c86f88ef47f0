"""Averaging of weakly perturbed linear oscillator systems."""

from ._core import (
    BlowUpError,
    FrequencyVector,
    HamEffReport,
    Hamiltonian,
    Monomial,
    MultiIndex,
    NonConvergenceError,
    NonresonanceCheck,
    Polynomial,
    PolynomialField,
    ResonanceReport,
    Trajectory,
    action_drift,
    average_at,
    averaged_hamiltonian,
    check_ham_eff,
    default_tolerance,
    hamiltonian_field,
    horizon_theta,
    is_nonresonant,
    lipschitz_estimate,
    resonance_table,
    resonant_part,
    run_cli,
    simulate,
    state_at,
    sup_distance,
)

__all__ = [
    "BlowUpError",
    "FrequencyVector",
    "HamEffReport",
    "Hamiltonian",
    "Monomial",
    "MultiIndex",
    "NonConvergenceError",
    "NonresonanceCheck",
    "Polynomial",
    "PolynomialField",
    "ResonanceReport",
    "Trajectory",
    "action_drift",
    "average_at",
    "averaged_hamiltonian",
    "check_ham_eff",
    "default_tolerance",
    "hamiltonian_field",
    "horizon_theta",
    "is_nonresonant",
    "lipschitz_estimate",
    "resonance_table",
    "resonant_part",
    "run_cli",
    "simulate",
    "state_at",
    "sup_distance",
]
