def parse_bool(value: str) -> bool:
    return value.strip().lower() in ['true', 'yes', '1']


def parse_count(value: str | None, default: int) -> int:
    """Positive integer from an environment value; unset or malformed values give ``default``."""
    try:
        return max(1, int(value.strip()))
    except (AttributeError, ValueError):
        return max(1, default)


def parse_int_list(value: str) -> list[int]:
    """
    Parses a comma separated list of integers such as ``"1,2,4,8"``.

    Args:
        value: Raw text, blanks around items are ignored

    Returns:
        Parsed integers in the given order
    """
    items = [item.strip() for item in value.split(',')]
    if not all(items):
        raise ValueError(f"Empty item in integer list {value!r}.")
    return [int(item) for item in items]


def is_power_of_two(value: int) -> bool:
    return value > 0 and value & (value - 1) == 0


def format_number(value: float) -> str:
    """Shortest text that parses back to ``value``; integral values lose the trailing ``.0``."""
    if float(value).is_integer() and abs(value) < 1e16:
        return str(int(value))
    return repr(float(value))

