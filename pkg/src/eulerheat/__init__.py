"""Analytic solutions of the 1-D continuity / Euler / heat-conduction system.

Modules: ``specfun`` (special functions), ``eos`` (closures and exponent
power counting), ``analytic`` (solution families), ``pdesolver`` (explicit
finite-difference referee), ``verify`` (residual engine) and ``cli``.
"""

from .errors import (
    ConfigError,
    ConvergenceError,
    DomainError,
    EulerHeatError,
    InstabilityError,
    PoleError,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "ConvergenceError",
    "DomainError",
    "EulerHeatError",
    "InstabilityError",
    "PoleError",
    "__version__",
]
