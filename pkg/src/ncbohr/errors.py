"""Exception hierarchy shared across the package."""


class BohrError(Exception):
    """Base class for all package errors."""


class ValidationError(BohrError, ValueError):
    """Bad input: wrong sizes, out-of-range parameters, malformed files."""


class CertificateError(ValidationError):
    """A positivity certificate does not reproduce the instance it claims to certify."""


class HypothesisError(BohrError):
    """The hypothesis of an inequality could not be established for an instance."""
