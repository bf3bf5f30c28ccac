"""Exception hierarchy.

Every error carries an ``exit_code`` used by the command-line front end:
1 for validation problems, 2 for numerical failures.
"""


class ATMError(Exception):
    exit_code = 1


class ValidationError(ATMError):
    exit_code = 1


class NumericalError(ATMError):
    exit_code = 2


class NonPositiveSample(ValidationError):
    def __init__(self, index, channel, value):
        self.index = index
        self.channel = channel
        self.value = value
        super().__init__(
            f"NonPositiveSample: ch{channel}[{index}] = {value!r} must be > 0 "
            "for fractional powers"
        )


class InvalidDistribution(ValidationError):
    pass


class InvalidConfig(ValidationError):
    pass


class TooFewSamples(ValidationError):
    pass


class ZeroVariance(ValidationError):
    pass


class LengthMismatch(ValidationError):
    pass


class ZeroPower(ValidationError):
    pass


class NonPositiveIterate(NumericalError):
    def __init__(self, index=None, channel=None, value=None):
        self.index = index
        self.channel = channel
        self.value = value
        where = "" if index is None else f" at sample {index}, y{channel} = {value!r}"
        super().__init__(f"NonPositiveIterate: iterate left the positive domain{where}")


class NoConvergence(NumericalError):
    def __init__(self, index, residual, last_iterate):
        self.index = index
        self.residual = residual
        self.last_iterate = last_iterate
        super().__init__(
            f"NoConvergence: sample {index} residual {residual:.3e} "
            f"(last iterate {tuple(last_iterate)})"
        )


class DivergenceDetected(NumericalError):
    def __init__(self, index, residual, best):
        self.index = index
        self.residual = residual
        self.best = best
        super().__init__(
            f"DivergenceDetected: sample {index} residual {residual:.3e} "
            f"exceeds 10x its minimum {best:.3e}"
        )


class SingularJacobian(NumericalError):
    pass


class DomainError(NumericalError):
    """Raised by the trainer when the solver fails mid-training."""
