"""Exception hierarchy shared across the package."""


class OverpredictError(Exception):
    """Base class for every error raised by this package."""


# signal / input validation


class BandwidthExceedsSamples(OverpredictError, ValueError):
    """Requested 2L+1 coefficients from fewer than 2L+1 samples."""


class NonHermitianCoefficients(OverpredictError, ValueError):
    """Complex coefficients do not describe a real signal."""


class InvalidDecay(OverpredictError, ValueError):
    """Coefficient decay exponent too small for a convergent tail."""


class NotPeriodized(OverpredictError, ValueError):
    """Signal has not been made endpoint-periodic."""


class GridTooCoarse(OverpredictError, ValueError):
    """Constraint grid too small for the requested bandwidth."""


# solver


class SolverError(OverpredictError):
    """A numerical solve did not produce a certified optimum."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class Infeasible(SolverError):
    pass


class Unbounded(SolverError):
    pass


class IterationLimit(SolverError):
    """Iteration cap reached; ``report`` holds the last iterate."""


# aggregation


class MixedBandwidths(OverpredictError, ValueError):
    pass


class MixedSides(OverpredictError, ValueError):
    pass


# ingestion


class ParseError(OverpredictError, ValueError):
    def __init__(self, message, row=None):
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)
        self.row = row


class TooFewSamples(OverpredictError, ValueError):
    pass
