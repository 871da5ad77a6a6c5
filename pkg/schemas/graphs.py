# schemas/graphs.py
from pydantic import BaseModel, Field
from typing import Dict, List, Optional

from schemas.algebra import AlgebraKind


class SpectrumStats(BaseModel):
    max_eigenvalue: float
    centrality: List[float]
    most_central_index: int = Field(..., ge=1, le=8)
    centrality_variance: float


class RepeatCounts(BaseModel):
    """Objects shared between orders 1..4 of one algebra."""

    subinvariants: int
    adjacencies: int
    graphs: int


class SmithCheck(BaseModel):
    dynkin_found: bool
    dynkin_orders: List[int] = Field(default_factory=list)
    only_dynkin_below_two: bool
    below_two: int = 0


class GraphCensus(BaseModel):
    algebra: AlgebraKind
    distinct_subinvariants: int
    distinct_adjacencies: int
    iso_classes: int
    repeats: RepeatCounts
    all_connected: bool
    eigenvalue_counts: List[int]
    iso_counts: List[int]
    eigenvalues_match_iso_classes: List[bool] = Field(default_factory=list)
    smith: Optional[SmithCheck] = None

    class Config:
        use_enum_values = True


class BaselineSummary(BaseModel):
    samples: int
    seed: int
    unique_matrices: int
    distinct_eigenvalues: int
    min_eigenvalue: float
    max_eigenvalue: float


class HistogramBin(BaseModel):
    bin_left: float
    bin_right: float
    count: int
    order: Optional[int] = None
    algebra: Optional[str] = None


class GraphsSummary(BaseModel):
    censuses: List[GraphCensus] = Field(default_factory=list)
    shared_between_algebras: Dict[str, int] = Field(default_factory=dict)
    baseline: Optional[BaselineSummary] = None
