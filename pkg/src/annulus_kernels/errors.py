"""Typed exceptions shared across the package.

The hierarchy mirrors the failure modes of the numerics: domain violations
(points or parameters outside the region of validity), Gamma poles,
series that cannot be truncated within budget, Landau levels whose norms
are not finite, and representation paths that require an integer magnetic
weight.
"""


class KernelError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(KernelError):
    """A point or parameter lies outside the domain of validity."""


class PoleError(KernelError):
    """A Gamma-type evaluation hit a pole (non-positive integer argument)."""


class ConvergenceError(KernelError):
    """A series could not be truncated to tolerance within the term budget."""


class InadmissibleLevelError(KernelError):
    """The requested Landau level has no normalizable eigenspace."""


class UnsupportedPathError(KernelError):
    """The requested representation requires an integer magnetic weight."""


class ImaginaryResidueError(KernelError):
    """A quantity that must be real came back with a large imaginary part."""


class UnknownSuiteError(KernelError):
    """An unrecognized verification suite name was requested."""
