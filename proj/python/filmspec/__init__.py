"""Spectrum, eigenvectors and resolvent of the one-sided thin-film operator."""

from ._filmspec import (
    Bracket,
    BracketError,
    ConfigError,
    ConvergenceError,
    EigenvalueRecord,
    Error,
    InsufficientRange,
    OverflowError,
    OverlapError,
    ResidualError,
    __version__,
    bound_suite,
    compute_spectrum,
    eigenvector,
    evaluate_f,
    fit_power_law,
    resolvent_summary,
    run_cli,
    scan,
    truncated_eigenvalues,
)

__all__ = [
    "Bracket",
    "BracketError",
    "ConfigError",
    "ConvergenceError",
    "EigenvalueRecord",
    "Error",
    "InsufficientRange",
    "OverflowError",
    "OverlapError",
    "ResidualError",
    "__version__",
    "bound_suite",
    "compute_spectrum",
    "eigenvector",
    "evaluate_f",
    "fit_power_law",
    "resolvent_summary",
    "run_cli",
    "scan",
    "truncated_eigenvalues",
]
