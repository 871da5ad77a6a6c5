# schemas/ml.py
from pydantic import BaseModel, Field, field_validator
from typing import Dict, List, Optional
from enum import Enum

from schemas.algebra import AlgebraKind


class TaskKind(str, Enum):
    REGRESS = "regress"
    CLASSIFY_ALGEBRA = "classify-algebra"
    REAL_VS_FAKE = "real-vs-fake"


class TrainingConfig(BaseModel):
    task: TaskKind = TaskKind.REGRESS
    algebra: Optional[AlgebraKind] = None
    order: int = Field(1, ge=0, le=8)
    grade: Optional[int] = Field(2, ge=0, le=8)
    hidden: List[int] = Field(default_factory=lambda: [256, 256, 256, 256])
    learning_rate: float = Field(0.001, gt=0)
    batch_size: int = Field(32, ge=1)
    epochs: int = Field(200, ge=1)
    patience: int = Field(20, ge=1)
    folds: int = Field(5, ge=2)
    seed: int = 0
    fake_per_algebra: int = Field(40000, ge=1)
    augment_by_multiplicity: bool = False
    saliency_runs: int = Field(100, ge=1)
    workers: int = Field(1, ge=1)

    @field_validator("grade")
    @classmethod
    def grade_is_even(cls, v: Optional[int]) -> Optional[int]:
        if v is not None and v % 2:
            raise ValueError("only even grades occur in the invariants")
        return v

    @field_validator("hidden")
    @classmethod
    def widths_positive(cls, v: List[int]) -> List[int]:
        if any(w < 1 for w in v):
            raise ValueError("hidden layer widths must be positive")
        return v

    class Config:
        use_enum_values = True
        extra = "forbid"


class EpochMetrics(BaseModel):
    epoch: int
    loss: float
    accuracy: Optional[float] = None


class FoldResult(BaseModel):
    fold: int
    accuracy: float
    train_rows: int
    test_rows: int
    epochs_run: int
    history: List[EpochMetrics] = Field(default_factory=list)


class CVResult(BaseModel):
    folds: List[FoldResult]
    mean_accuracy: float

    @property
    def fold_accuracies(self) -> List[float]:
        return [f.accuracy for f in self.folds]


class SaliencyResult(BaseModel):
    task: TaskKind
    runs: int
    values: List[float]
    positions: Optional[List[float]] = None

    class Config:
        use_enum_values = True


class TrainingSummary(BaseModel):
    config: TrainingConfig
    accuracy: float
    fold_accuracies: List[float] = Field(default_factory=list)
    rows: Dict[str, int] = Field(default_factory=dict)


class PCASummary(BaseModel):
    algebra: AlgebraKind
    dedup: bool
    rows: int
    elbow: int
    order_elbows: Dict[str, int] = Field(default_factory=dict)
    mirror_orders_agree: List[bool] = Field(default_factory=list)
    leading_ratios: List[float] = Field(default_factory=list)

    class Config:
        use_enum_values = True
