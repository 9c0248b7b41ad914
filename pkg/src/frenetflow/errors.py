"""Exception hierarchy shared by all frenetflow modules."""


class FrenetFlowError(Exception):
    """Base class for every error raised by this package."""


class CurveError(FrenetFlowError, ValueError):
    """Invalid curve construction input."""


class InsufficientSamples(CurveError):
    pass


class NonIncreasingGrid(CurveError):
    pass


class DimensionMismatch(CurveError):
    pass


class OrderTooHigh(FrenetFlowError, ValueError):
    pass


class OutOfRange(FrenetFlowError, ValueError):
    pass


class NumericalFailure(FrenetFlowError):
    """Raised when a numerical quantity is undefined on the given data."""


class DegenerateSpeed(NumericalFailure):
    def __init__(self, min_speed, max_speed):
        self.min_speed = float(min_speed)
        self.max_speed = float(max_speed)
        super().__init__(
            f"speed vanishes: min v = {self.min_speed:.3e}, max v = {self.max_speed:.3e}"
        )


class DegenerateCurve(NumericalFailure):
    """The ``index``-th derivative is linearly dependent on its predecessors at ``u``."""

    def __init__(self, index, u):
        self.index = int(index)
        self.u = float(u)
        super().__init__(f"derivative {self.index} is dependent on lower derivatives at u = {self.u:.6g}")


class NoPeriodicSolution(NumericalFailure):
    def __init__(self, defect, scale):
        self.defect = float(defect)
        self.scale = float(scale)
        super().__init__(
            f"closed curve has no periodic tangential speed: loop integral of f2*k1 = {self.defect:.6g}"
        )


class EvolutionError(NumericalFailure):
    """A time step failed; ``trajectory`` holds every snapshot computed before the failure."""

    def __init__(self, trajectory, cause):
        self.trajectory = trajectory
        self.cause = cause
        t = trajectory.times[-1] if len(trajectory) else 0.0
        super().__init__(f"evolution aborted after t = {t:.6g}: {cause}")


class ResamplingBreaksComparison(FrenetFlowError, ValueError):
    pass


class DimensionTooSmall(FrenetFlowError, ValueError):
    pass


class AxisOutOfRange(FrenetFlowError, ValueError):
    pass


class ScenarioError(FrenetFlowError, ValueError):
    """Base for scenario-file problems (exit status 2 on the command line)."""


class ScenarioSyntaxError(ScenarioError):
    def __init__(self, line, message="malformed line"):
        self.line = line
        super().__init__(f"line {line}: {message}")


class UnknownKey(ScenarioError):
    def __init__(self, line, key):
        self.line = line
        self.key = key
        super().__init__(f"line {line}: unknown key {key!r}")


class ValidationError(ScenarioError):
    def __init__(self, field, reason):
        self.field = field
        self.reason = reason
        super().__init__(f"{field}: {reason}")
