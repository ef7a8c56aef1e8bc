"""Swarm-vs-swarm engagement simulation and defender trajectory optimization."""

from ._core import (
    ConfigError,
    ConsistencyError,
    ControlPoints,
    DomainError,
    Error,
    IntegrationError,
    ParseError,
    Scenario,
    ValidationError,
    basis,
    compare,
    default_initializer,
    initial_control_points,
    montecarlo,
    optimize,
    phi,
    propagate,
    tradeoff,
)

__all__ = [
    "ConfigError",
    "ConsistencyError",
    "ControlPoints",
    "DomainError",
    "Error",
    "IntegrationError",
    "ParseError",
    "Scenario",
    "ValidationError",
    "basis",
    "compare",
    "default_initializer",
    "initial_control_points",
    "montecarlo",
    "optimize",
    "phi",
    "propagate",
    "tradeoff",
]
