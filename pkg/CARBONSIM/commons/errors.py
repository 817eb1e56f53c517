# [EXCEPTIONS]
#==============================================================================
# Every failure raised by the package derives from CarbonSimError, and also from
# the closest builtin exception so callers can keep catching ValueError or
# RuntimeError
#==============================================================================
class CarbonSimError(Exception):
    pass


# [PLATFORM DESCRIPTION]
#------------------------------------------------------------------------------
class PlatformError(CarbonSimError, ValueError):
    pass

class MalformedPowerProfile(PlatformError):
    pass

class OrderingViolation(PlatformError):
    pass

class DuplicateHostId(PlatformError):
    pass

class MissingAttribute(PlatformError):
    pass

class MissingProperty(PlatformError):
    pass

class UnparsableSpeed(PlatformError):
    pass

class InvalidCarbonIntensity(PlatformError):
    pass

class ConflictingCarbonIntensity(PlatformError):
    pass

class PlatformValidationError(PlatformError):

    def __init__(self, violations):
        self.violations = list(violations)
        details = '; '.join(str(v) for v in self.violations)
        super().__init__(f'Invalid platform: {details}')


# [WORKLOAD AND EVENTS]
#------------------------------------------------------------------------------
class WorkloadError(CarbonSimError, ValueError):
    pass

class DuplicateJobId(WorkloadError):
    pass

class MissingField(WorkloadError):
    pass

class NegativeField(WorkloadError):
    pass

class UnknownAction(WorkloadError):
    pass

class MissingValue(WorkloadError):
    pass

class UnknownHost(WorkloadError):
    pass


# [SIMULATION]
#------------------------------------------------------------------------------
class SimulationError(CarbonSimError, RuntimeError):
    pass

class ClockRegression(SimulationError):
    pass

class PreemptionUnsupported(SimulationError):
    pass

class DoubleRegistration(SimulationError):
    pass

class EngineRunning(SimulationError):
    pass

class InvalidOccupancy(SimulationError):
    pass


# [EVALUATION]
#------------------------------------------------------------------------------
class EvaluationError(CarbonSimError, ValueError):
    pass

class LengthMismatch(EvaluationError):
    pass

class ZeroVariance(EvaluationError):
    pass

class ZeroTrueValue(EvaluationError):
    pass

class CountMismatch(EvaluationError):
    pass

class LabelMismatch(EvaluationError):
    pass

class MissingColumn(EvaluationError):
    pass

class NonNumericCell(EvaluationError):
    pass
