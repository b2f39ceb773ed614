from pydantic import BaseModel, Field


class DualityCheck(BaseModel):
    """Cauchy-Schwarz equality case at one point: ``lhs`` is the diagonal ℓ² norm."""
    x: int = Field(ge=0)
    y: int = Field(ge=0)
    n: int = Field(ge=0)
    lhs: float = Field(ge=0)
    rhs: float
    relative_error: float = Field(ge=0)
    passed: bool
