"""1D time-dependent Schrodinger equation: Crank-Nicolson solver with wave sources and absorbers."""

from ._core import (
    EXIT_CONFIG,
    EXIT_NUMERIC,
    EXIT_OK,
    ConfigError,
    NumericError,
    Scenario,
    barrier_transmission,
    box_gaussian_field,
    current_at,
    free_gaussian_field,
    k_grid,
    lattice_frequency,
    load_config,
    parse_config,
    run,
    simulate,
    sweep,
    thomas_solve,
    total_norm,
)

__all__ = [
    "EXIT_CONFIG",
    "EXIT_NUMERIC",
    "EXIT_OK",
    "ConfigError",
    "NumericError",
    "Scenario",
    "barrier_transmission",
    "box_gaussian_field",
    "current_at",
    "free_gaussian_field",
    "k_grid",
    "lattice_frequency",
    "load_config",
    "parse_config",
    "run",
    "simulate",
    "sweep",
    "thomas_solve",
    "total_norm",
]
