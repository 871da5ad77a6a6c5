# schemas/sweep.py
from pydantic import BaseModel, Field
from typing import Any, Dict, List, Optional

from schemas.algebra import AlgebraKind, DatasetFormat, Frame, VerifyLevel


class RunConfig(BaseModel):
    command: str
    algebras: List[AlgebraKind] = Field(default_factory=list)
    output_dir: str
    workers: int = Field(1, ge=1)
    seed: int = 0
    format: Optional[DatasetFormat] = None
    verify: Optional[VerifyLevel] = None
    inputs: Dict[str, str] = Field(default_factory=dict)
    options: Dict[str, Any] = Field(default_factory=dict)

    class Config:
        use_enum_values = True


class DatasetManifest(BaseModel):
    algebra: AlgebraKind
    format: DatasetFormat
    rows: int
    columns: int
    dtype: str
    sha256: str
    frame: Frame = Frame.SIMPLE_ROOT

    class Config:
        use_enum_values = True


class VerificationCheck(BaseModel):
    name: str
    passed: bool
    checked: int
    failures: List[int] = Field(default_factory=list)
    detail: Optional[str] = None


class VerificationReport(BaseModel):
    algebra: AlgebraKind
    level: VerifyLevel
    rows: int
    sampled_ranks: List[int] = Field(default_factory=list)
    checks: List[VerificationCheck] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed_checks(self) -> List[str]:
        return [c.name for c in self.checks if not c.passed]

    class Config:
        use_enum_values = True
