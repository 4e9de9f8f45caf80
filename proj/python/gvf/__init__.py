"""Guiding vector fields for path following with reactive obstacle avoidance."""

from ._core import (
    Error,
    InvalidArgument,
    Scenario,
    SingularityError,
    bump_values,
    equal_level,
    fit_rbf,
)

__all__ = [
    "Error",
    "InvalidArgument",
    "Scenario",
    "SingularityError",
    "bump_values",
    "equal_level",
    "fit_rbf",
]
