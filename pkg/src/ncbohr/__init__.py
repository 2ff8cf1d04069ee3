"""Numerical verification of noncommutative Bohr inequalities on truncated Fock spaces."""

from .errors import BohrError, CertificateError, HypothesisError, ValidationError

__version__ = "0.1.0"

__all__ = ["BohrError", "CertificateError", "HypothesisError", "ValidationError", "__version__"]
