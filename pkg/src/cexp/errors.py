"""Exception hierarchy shared across the package.

The CLI maps exception classes to exit codes: validation failures exit 2,
uncertified requests (outside the convergence radius, without --force)
exit 3, resource-cap refusals exit 4.
"""


class CexpError(Exception):
    exit_code = 1


class ValidationError(CexpError):
    exit_code = 2


class MalformedSpec(ValidationError):
    pass


class NormViolation(ValidationError):
    pass


class DuplicateSupport(ValidationError):
    pass


class CoefficientOutOfRange(ValidationError):
    pass


class NonHermitianTerm(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class EpsilonNonpositive(ValidationError):
    pass


class DeltaOutOfRange(ValidationError):
    pass


class TimeTooLarge(ValidationError):
    pass


class MixedStateUnsupported(ValidationError):
    pass


class NotAPartition(ValidationError):
    pass


class IncompatibleHamiltonians(ValidationError):
    pass


class DisconnectedInput(ValidationError):
    pass


class DisconnectedCluster(ValidationError):
    pass


class SizeZero(ValidationError):
    pass


class OutsideRadius(CexpError):
    exit_code = 3


class ResourceCap(CexpError):
    exit_code = 4


class GraphTooLarge(ResourceCap):
    pass


class SizeCap(ResourceCap):
    pass


class PlanInfeasible(ResourceCap):
    pass


class SystemTooLarge(ResourceCap):
    pass


class IllConditionedFit(ResourceCap):
    pass
