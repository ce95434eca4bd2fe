"""Exception hierarchy shared by every module of the package."""


class QcorrError(Exception):
    """Base class for all package errors."""


class InvalidInput(QcorrError, ValueError):
    """Input data that violates an operation's precondition."""


class NonHermitianInput(InvalidInput):
    pass


class DimensionMismatch(InvalidInput):
    pass


class ZeroTrace(InvalidInput):
    pass


class NotPositive(InvalidInput):
    """Operator has an eigenvalue below -1e-8, i.e. it is genuinely not PSD."""


class DomainError(InvalidInput):
    """A spectral function is undefined on one of the eigenvalues."""


class SizeTooLarge(InvalidInput):
    pass


class RankDeficient(InvalidInput):
    """The SLD solve needs a full-rank state.

    Mix the state with the identity (see :func:`qcorr.oracle.perturb_full_rank`)
    before retrying.
    """


class ZeroFisher(InvalidInput):
    """Fisher information is zero, so the Cramer-Rao bound is undefined."""


class InvalidSpec(InvalidInput):
    """A sweep specification or model parameter set failed validation.

    ``field`` names the offending entry.
    """

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field


class NumericalError(QcorrError, ArithmeticError):
    """A numerical routine failed to produce a trustworthy result."""


class ConvergenceFailure(NumericalError):
    pass
