class EpsilonIndexError(ValueError):
    pass


class SchippPreconditionError(ValueError):
    pass


class IdentityLimitError(ValueError):
    pass
