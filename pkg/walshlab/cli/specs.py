from typing import Annotated, ClassVar, Literal, Self

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from walshlab.cli.exceptions import SpecParseError
from walshlab.config import settings
from walshlab.config.utils.utils import format_number


class _FunctionSpec(BaseModel):
    """Text form ``family:p1,p2,...``; parameters keep the order of ``parameters``."""
    model_config = ConfigDict(frozen=True)

    parameters: ClassVar[tuple[str, ...]] = ()
    separator: ClassVar[str] = ','

    def __str__(self) -> str:
        values = (getattr(self, name) for name in self.parameters)
        return f"{self.family}:" + self.separator.join(
            format_number(value) if isinstance(value, float) else str(value) for value in values
        )


class ConstSpec(_FunctionSpec):
    family: Literal['const'] = 'const'
    value: float = Field(allow_inf_nan=False)

    parameters: ClassVar[tuple[str, ...]] = ('value',)


class WalshSpec(_FunctionSpec):
    """``w_i(x) w_j(y)``."""
    family: Literal['walsh'] = 'walsh'
    i: int = Field(ge=0)
    j: int = Field(ge=0)

    parameters: ClassVar[tuple[str, ...]] = ('i', 'j')


class RectSpec(_FunctionSpec):
    """Indicator of ``I × J`` where ``I`` holds the codes whose top ``x_length`` bits equal ``x_prefix``."""
    family: Literal['rect'] = 'rect'
    x_prefix: int = Field(ge=0)
    x_length: int = Field(ge=0, le=settings.MAX_RESOLUTION)
    y_prefix: int = Field(ge=0)
    y_length: int = Field(ge=0, le=settings.MAX_RESOLUTION)

    parameters: ClassVar[tuple[str, ...]] = ('x_prefix', 'x_length', 'y_prefix', 'y_length')

    @model_validator(mode="after")
    def validate_prefixes_fit(self) -> Self:
        if self.x_prefix >= 1 << self.x_length or self.y_prefix >= 1 << self.y_length:
            raise ValueError("A prefix does not fit its bit length")
        return self


class StepSpec(_FunctionSpec):
    """Level-``level`` step function with values uniform in [-1, 1], drawn from ``seed``."""
    family: Literal['step'] = 'step'
    level: int = Field(ge=0, le=settings.MAX_RESOLUTION)
    seed: int = Field(ge=0)

    parameters: ClassVar[tuple[str, ...]] = ('level', 'seed')
    separator: ClassVar[str] = ':'


class SingularSpec(_FunctionSpec):
    """``((u + 1/2) 2**-N)**-beta · ((v + 1/2) 2**-N)**-beta`` at cell midpoints."""
    family: Literal['singular'] = 'singular'
    beta: float = Field(gt=0, lt=1)

    parameters: ClassVar[tuple[str, ...]] = ('beta',)


FunctionSpec = Annotated[
    ConstSpec | WalshSpec | RectSpec | StepSpec | SingularSpec,
    Field(discriminator='family'),
]

FAMILIES: dict[str, type[_FunctionSpec]] = {
    'const': ConstSpec,
    'walsh': WalshSpec,
    'rect': RectSpec,
    'step': StepSpec,
    'singular': SingularSpec,
}


def parse_spec(text: str) -> FunctionSpec:
    """
    Parses ``const:c``, ``walsh:i,j``, ``rect:a0,a1,b0,b1``, ``step:L:seed`` or ``singular:beta``.

    Raises:
        SpecParseError: with the position of the offending family or parameter
    """
    lead = len(text) - len(text.lstrip())
    body = text.strip()
    family, colon, rest = body.partition(':')
    if family not in FAMILIES:
        raise SpecParseError(f"Unknown function family {family!r}", lead)
    if not colon:
        raise SpecParseError(f"Family {family!r} needs parameters after ':'", lead + len(family))

    model = FAMILIES[family]
    start = lead + len(family) + 1
    items = rest.split(model.separator)
    if len(items) != len(model.parameters):
        raise SpecParseError(
            f"Family {family!r} takes {len(model.parameters)} parameter(s), got {len(items)}", start
        )

    positions = {}
    offset = start
    for name, item in zip(model.parameters, items):
        positions[name] = offset + len(item) - len(item.lstrip())
        offset += len(item) + 1

    data = {name: item.strip() for name, item in zip(model.parameters, items)}
    try:
        return model.model_validate({'family': family, **data})
    except ValidationError as e:
        error = e.errors()[0]
        field = error['loc'][0] if error['loc'] else None
        raise SpecParseError(
            f"Invalid {family} parameter: {error['msg']}", positions.get(field, start)
        ) from e


def format_spec(spec: FunctionSpec) -> str:
    return str(spec)
