"""Delayed gradient descent-ascent and extra-gradient for saddle-point problems."""

from ._core import (
    ConfigError,
    DomainSet,
    PreconditionError,
    ProblemConstants,
    SaddleProblem,
    check_bounds,
    delays,
    duality_gap,
    reproduce_fig1,
    run,
    stepsize_theorem1,
    stepsize_theorem2,
    stepsize_theorem3,
)

__all__ = [
    "ConfigError",
    "DomainSet",
    "PreconditionError",
    "ProblemConstants",
    "SaddleProblem",
    "check_bounds",
    "delays",
    "duality_gap",
    "reproduce_fig1",
    "run",
    "stepsize_theorem1",
    "stepsize_theorem2",
    "stepsize_theorem3",
]
