class LevelOutOfRangeError(ValueError):
    pass
