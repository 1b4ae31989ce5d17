"""Excitation-normalized DREM parameter identification."""

from ._core import (
    ConfigError,
    ExperimentResult,
    NumericalError,
    TransferFunction,
    add_noise,
    adjugate_det,
    error_bounds,
    excitation_level,
    make_step_input,
    normalize,
    numeric_order,
    order_change_times,
    phi_excitation,
    preset_config,
    preset_names,
    realize_state_space,
    run_experiment,
    run_sweep,
    run_synthetic,
    saturate,
    simulate,
    ub_curve,
)

__all__ = [
    "ConfigError",
    "ExperimentResult",
    "NumericalError",
    "TransferFunction",
    "add_noise",
    "adjugate_det",
    "error_bounds",
    "excitation_level",
    "make_step_input",
    "normalize",
    "numeric_order",
    "order_change_times",
    "phi_excitation",
    "preset_config",
    "preset_names",
    "realize_state_space",
    "run_experiment",
    "run_sweep",
    "run_synthetic",
    "saturate",
    "simulate",
    "ub_curve",
]

__version__ = "0.1.0"
