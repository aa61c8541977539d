"""Benchmark kernels for delay lines, NARX networks and echo state networks."""

from ._resbench import (
    ContractError,
    NumericalError,
    UndefinedMetric,
    fit_power_law,
    functional_compare,
    generate,
    nrmse,
    rnmse,
    run_protocol,
    samp,
    solve_least_squares,
)

__all__ = [
    "ContractError",
    "NumericalError",
    "UndefinedMetric",
    "fit_power_law",
    "functional_compare",
    "generate",
    "nrmse",
    "rnmse",
    "run_protocol",
    "samp",
    "solve_least_squares",
]
