class SweepCapError(ValueError):
    pass


class UnsupportedExponentError(ValueError):
    pass


class InvalidPhiSpecError(ValueError):
    pass


class TermCountError(ValueError):
    pass


class PhiOverflowError(ArithmeticError):
    pass
