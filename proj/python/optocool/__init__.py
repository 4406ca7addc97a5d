"""Double-cavity-mode optomechanical cooling under laser phase noise."""

from ._core import (
    MeasurementParams,
    NoiseModel,
    OptocoolError,
    Sideband,
    SteadyState,
    SystemParams,
    approximate_steady_state,
    cooling_report,
    ensemble_phonon,
    gamma_tilde,
    infer_phonon,
    measurement_alpha_3,
    output_spectrum,
    phase_noise_phonons,
    q_limit,
    run_cli,
    sideband_ratio,
    solve_steady_state,
    thermal_occupation,
)

__all__ = [
    "MeasurementParams",
    "NoiseModel",
    "OptocoolError",
    "Sideband",
    "SteadyState",
    "SystemParams",
    "approximate_steady_state",
    "cooling_report",
    "ensemble_phonon",
    "gamma_tilde",
    "infer_phonon",
    "measurement_alpha_3",
    "output_spectrum",
    "phase_noise_phonons",
    "q_limit",
    "run_cli",
    "sideband_ratio",
    "solve_steady_state",
    "thermal_occupation",
]
