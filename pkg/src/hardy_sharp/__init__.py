"""Oscillation-operator calculus and sharp-constant verification on the
cone of nonnegative, nonincreasing functions."""

from .kernel import (
    DomainError,
    HEvaluator,
    QuadratureError,
    QuadratureResult,
    digamma,
    exp_moment,
    gamma_upper,
    h_eval,
    integrate,
    integrate_log_singular,
)

__version__ = "0.1.0"
