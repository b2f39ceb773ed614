class ResolutionError(ValueError):
    pass


class PointOutOfRangeError(ValueError):
    pass


class FrequencyOutOfRangeError(ValueError):
    pass


class CoordinateOutOfRangeError(ValueError):
    pass


class OutOfRangeError(ValueError):
    pass


class ResolutionMismatchError(ValueError):
    pass


class InvalidAxisError(ValueError):
    pass


class NonFiniteValuesError(ValueError):
    pass


class GridFormatError(ValueError):
    pass
