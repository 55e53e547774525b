"""Exception taxonomy shared across the package."""


class WeberError(Exception):
    """Base class for all package errors."""


class DomainError(WeberError):
    """An argument is outside the mathematical domain of the operation."""


class PrecisionError(WeberError):
    """A series coefficient beyond the declared precision was requested."""


class AmbiguityError(WeberError):
    """The modular-polynomial nullspace has dimension != 1 at this precision."""


class ConsistencyError(WeberError):
    """A solution exists but violates an expected structural property."""


class SingularParameter(WeberError):
    """A curve-family parameter makes the discriminant vanish."""


class KernelError(WeberError):
    """A polynomial does not define the kernel of an isogeny."""


class DegenerateSeed(WeberError):
    """A chain seed hits a degenerate constant (zero or singular curve)."""


class NeedsExtension(WeberError):
    """A chain step requires a square root that does not exist in GF(p^2)."""


class ChartError(WeberError):
    """All coordinate charts of a projective map vanish at this point."""


class DivergenceError(WeberError):
    """A group closure exceeded its safety bound (arithmetic bug guard)."""


class AmbiguousOrbit(WeberError):
    """Partial twist characters do not determine a consistent grouping."""


class InternalError(WeberError):
    """An invariant that should be unconditionally true failed."""
