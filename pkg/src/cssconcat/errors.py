"""Exception types.  All derive from ``ValueError`` so CLI code can catch one thing."""


class CodeError(ValueError):
    pass


class NotPrimeError(CodeError):
    pass


class ReduciblePolynomialError(CodeError):
    def __init__(self, msg, factor=None):
        super().__init__(msg)
        self.factor = factor


class NotPrimitiveError(CodeError):
    def __init__(self, msg, order):
        super().__init__(msg)
        self.order = order


class DependentBasisError(CodeError):
    pass


class SingularMatrixError(CodeError):
    """Raised by ``invert``; ``null_vector`` is a nonzero v with M v^t = 0."""

    def __init__(self, msg, null_vector):
        super().__init__(msg)
        self.null_vector = null_vector


class CSSViolationError(CodeError):
    """``witness`` lies in the dual of the second code but not in the first."""

    def __init__(self, msg, witness):
        super().__init__(msg)
        self.witness = witness


class TableTooLargeError(CodeError):
    pass
