"""Exception hierarchy shared by all modules."""


class Z22Error(Exception):
    """Base class for every error raised by the engine."""


class SurfaceMismatchError(Z22Error, ValueError):
    """Two classes living on different surfaces were combined."""


class UnsupportedBaseError(Z22Error, ValueError):
    """The requested computation is not offered on this surface."""


class ParityObstruction(Z22Error, ValueError):
    """A pairwise branch sum is not divisible by two in the Picard lattice."""


class BuildingDataError(Z22Error, ValueError):
    """Building data violates the cover compatibility identities or an annotation."""


class RuleTableMiss(Z22Error, ValueError):
    """No intermediate double-cover rule matches the branch configuration."""


class PreconditionError(Z22Error, ValueError):
    """An operation was called outside its documented domain."""


class ClassificationError(Z22Error, ValueError):
    """A record cannot be placed into a moduli component."""


class ConstructionError(Z22Error, ValueError):
    """A construction was requested for an invalid (line, chi, component)."""
