class SpecParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class SpecGenerationError(ValueError):
    pass


class UsageError(ValueError):
    pass
