# schemas/algebra.py
from enum import Enum


class AlgebraKind(str, Enum):
    A8 = "a8"
    D8 = "d8"
    E8 = "e8"

    @property
    def label(self) -> str:
        return self.value.upper()


class Colour(str, Enum):
    BLACK = "B"
    WHITE = "W"

    def flipped(self) -> "Colour":
        return Colour.WHITE if self is Colour.BLACK else Colour.BLACK


class VerifyLevel(str, Enum):
    SAMPLED = "sampled"
    EXHAUSTIVE = "exhaustive"


class DatasetFormat(str, Enum):
    CSV = "csv"
    JSONL = "jsonl"


class Frame(str, Enum):
    """Blade basis a dataset's coefficients are written in."""

    SIMPLE_ROOT = "simple-root"
    EUCLIDEAN = "euclidean"
