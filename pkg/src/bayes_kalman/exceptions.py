"""Exception types shared across the package."""


class ParameterError(ValueError):
    """A model parameter violates its domain (non-positive noise, non-finite value, ...)."""


class ModelError(ValueError):
    """A model configuration failed validation.

    ``errors`` holds every violation found, not only the first one.
    """

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors) if self.errors else "invalid model")


class ObservationError(ValueError):
    """Observation series inconsistent with the model it is paired with."""


class NumericError(ArithmeticError):
    """Base class for failures of the grid quadrature."""


class ZeroEvidenceError(NumericError):
    """The evidence integral of a Bayes update underflowed to zero."""


class MassLeakError(NumericError):
    """Probability mass escaped the output grid of a transition."""
