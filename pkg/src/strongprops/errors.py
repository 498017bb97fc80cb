"""Exception hierarchy shared by every module."""

from __future__ import annotations

import warnings


class StrongPropsError(Exception):
    """Base class for all toolkit errors."""


class InvalidFieldError(StrongPropsError, ValueError):
    """Entries live in incompatible quadratic fields, or a radicand is not square-free."""


class NumericError(StrongPropsError, ValueError):
    pass


class ParseError(StrongPropsError, ValueError):
    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at {position})"
        super().__init__(message)


class ShapeError(StrongPropsError, ValueError):
    pass


class PatternError(StrongPropsError, ValueError):
    pass


class ResourceError(StrongPropsError):
    pass


class ExactOnlyError(StrongPropsError, TypeError):
    pass


class DomainError(StrongPropsError, ValueError):
    pass


class DistinctnessError(StrongPropsError, ValueError):
    pass


class CorpusIntegrityError(StrongPropsError):
    def __init__(self, cert_id: str, claim: str, detail: str = ""):
        self.cert_id = cert_id
        self.claim = claim
        msg = f"certificate {cert_id!r}: claim {claim!r} failed"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class ContinuationError(StrongPropsError):
    def __init__(self, message: str, path_log=None):
        self.path_log = list(path_log or [])
        super().__init__(message)


class RejectedSeedError(StrongPropsError):
    pass


class LiftIntegrityError(StrongPropsError):
    pass


class SpectrumCollisionError(StrongPropsError, ValueError):
    pass


class AmbiguousClusterWarning(UserWarning):
    """Eigenvalue clusters are too close to the tolerance to be trusted."""


def warn_ambiguous(message: str) -> None:
    warnings.warn(message, AmbiguousClusterWarning, stacklevel=3)
