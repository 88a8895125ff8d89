"""Pseudo almost periodic delayed neural networks."""

from ._papdyn import (
    EXIT_CONFIG,
    EXIT_NUMERICAL,
    EXIT_PASS,
    EXIT_VERDICT,
    ConfigError,
    ContractError,
    DomainError,
    Error,
    NumericalError,
    RunConfig,
    UnboundedError,
    constants,
    decay_rate,
    load_config,
    margin_check,
    parse_config,
    picard_solve,
    run_command,
    simulate,
)

__all__ = [
    "EXIT_CONFIG",
    "EXIT_NUMERICAL",
    "EXIT_PASS",
    "EXIT_VERDICT",
    "ConfigError",
    "ContractError",
    "DomainError",
    "Error",
    "NumericalError",
    "RunConfig",
    "UnboundedError",
    "constants",
    "decay_rate",
    "load_config",
    "margin_check",
    "parse_config",
    "picard_solve",
    "run_command",
    "simulate",
]
