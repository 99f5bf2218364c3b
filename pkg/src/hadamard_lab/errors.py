"""Exception hierarchy shared by every module of the package."""


class HadamardLabError(Exception):
    """Base class for all errors raised by hadamard_lab."""


class SpaceMismatch(HadamardLabError):
    """Two objects that must live in the same space do not."""


class DomainError(HadamardLabError, ValueError):
    """An argument lies outside the domain of an operation."""


class ImproperFunction(HadamardLabError):
    """A set is empty, or a function has an empty effective domain."""


class Unconverged(HadamardLabError):
    """An iterative solver exhausted its budget.

    The best iterate found so far is kept in ``best``.
    """

    def __init__(self, message, best=None, iterations=0):
        super().__init__(message)
        self.best = best
        self.iterations = iterations


class Unbounded(HadamardLabError):
    """A point sequence is not bounded over its window."""


class PreconditionFailed(HadamardLabError):
    """A checker was called on inputs that do not satisfy its hypothesis."""


class NoUniformBound(HadamardLabError):
    """Envelope values diverge, so no uniform quadratic minorant exists."""


class NoBound(HadamardLabError):
    """The equi-Lipschitz hypothesis fails on the sampled window."""


class NotCauchy(HadamardLabError):
    """A function sequence is not Cauchy for the Mosco metric."""


class UnsupportedSpace(HadamardLabError, NotImplementedError):
    """The requested operation has no solver for this space."""


class ScenarioError(HadamardLabError, ValueError):
    """A scenario file does not parse or does not match the schema."""
