# schemas/frequency.py
from pydantic import BaseModel, Field
from typing import Dict, List, Optional
from enum import Enum

from schemas.algebra import AlgebraKind


class GroupKind(str, Enum):
    DOUBLET = "doublet"
    QUADRUPLET = "quadruplet"
    OCTUPLET = "octuplet"
    OTHER = "other"


GRADE_NAMES = {0: "scalar", 2: "bivector", 4: "quadrivector", 6: "sextivector", 8: "pseudoscalar"}


class SocmClass(BaseModel):
    class_id: int
    representative_rank: int
    representative_perm: List[int]
    multiplicity: int
    member_ranks: List[int] = Field(default_factory=list)
    barcodes: List[str] = Field(default_factory=list)
    bipartite_members: int = 0


class ClassGroup(BaseModel):
    multiplicity: int
    kind: GroupKind
    class_ids: List[int]
    inversion_closed: bool = False
    bw_closed: bool = False

    class Config:
        use_enum_values = True


class ClassRelations(BaseModel):
    inversion_partner: Dict[int, int] = Field(default_factory=dict)
    inversion_consistent: bool = True
    bw_partner: Dict[int, int] = Field(default_factory=dict)
    doublets_inversion_related: bool = False
    doublets_bw_self_dual: bool = False
    bw_symmetry_present: bool = False
    min_doublet_representatives: List[List[int]] = Field(default_factory=list)
    max_doublet_representatives: List[List[int]] = Field(default_factory=list)
    max_doublet_bipartite: bool = False
    notes: List[str] = Field(default_factory=list)


class SubinvariantTable(BaseModel):
    """Distinct non-zero coefficient vectors per (order, grade); None = structurally absent."""

    algebra: AlgebraKind
    identify_sign: bool
    grades: List[int] = Field(default_factory=lambda: [0, 2, 4, 6, 8])
    counts: List[List[Optional[int]]]

    def cell(self, order: int, grade: int) -> Optional[int]:
        return self.counts[order][self.grades.index(grade)]

    class Config:
        use_enum_values = True


class FrequencyReport(BaseModel):
    algebra: AlgebraKind
    identify_sign: bool = False
    total: int
    class_count: int
    classes: List[SocmClass]
    groups: List[ClassGroup] = Field(default_factory=list)
    census: Dict[str, int] = Field(default_factory=dict)
    min_multiplicity: int
    max_multiplicity: int
    parity: str
    sorted_multiplicities: List[int]
    sign_identification_preserved: Optional[bool] = None
    relations: Optional[ClassRelations] = None
    subinvariants: Optional[SubinvariantTable] = None

    def multiplicity_of(self, class_id: int) -> int:
        return self.classes[class_id].multiplicity

    class Config:
        use_enum_values = True