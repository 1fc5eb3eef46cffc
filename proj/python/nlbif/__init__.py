"""Python bindings for the nlbif toolkit."""

from ._core import (
    CCurve,
    CCurveOptions,
    ConfigError,
    ConvergenceError,
    Diffusion,
    DomainError,
    Error,
    HorizonError,
    Nonlinearity,
    ValidationError,
    build_curves,
    find_equilibria,
    local_equilibrium,
    run,
    simulate,
    solve_energy,
    spectral_index,
    sweep,
    tau,
)

__all__ = [
    "CCurve",
    "CCurveOptions",
    "ConfigError",
    "ConvergenceError",
    "Diffusion",
    "DomainError",
    "Error",
    "HorizonError",
    "Nonlinearity",
    "ValidationError",
    "build_curves",
    "find_equilibria",
    "local_equilibrium",
    "run",
    "simulate",
    "solve_energy",
    "spectral_index",
    "sweep",
    "tau",
]
