from typing import Optional

from pydantic import BaseModel, Field


class IdentityFailure(BaseModel):
    n: int = Field(ge=0)
    m: int = Field(ge=0)
    code: int = Field(ge=0)
    expected: float
    actual: float


class IdentityReport(BaseModel):
    name: str
    n_max: int = Field(ge=0)
    checked: int = Field(ge=0)
    passed: int = Field(ge=0)
    first_failure: Optional[IdentityFailure] = None

    @property
    def ok(self) -> bool:
        return self.passed == self.checked and self.first_failure is None
