class EmptyCorpusError(ValueError):
    pass


class InvalidLambdaGridError(ValueError):
    pass


class RationalModeError(ValueError):
    pass


class DualCoefficientsError(ValueError):
    pass
