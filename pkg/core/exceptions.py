# core/exceptions.py
from typing import Any, Optional


class SocmError(Exception):
    """Base error carrying a human-readable detail and the CLI exit code."""

    exit_code: int = 1

    def __init__(self, detail: str, exit_code: Optional[int] = None, **context: Any):
        super().__init__(detail)
        self.detail = detail
        if exit_code is not None:
            self.exit_code = exit_code
        self.context = context

    def __str__(self) -> str:
        if not self.context:
            return self.detail
        extra = ", ".join(f"{k}={v}" for k, v in self.context.items())
        return f"{self.detail} ({extra})"


class MetricError(SocmError):
    exit_code = 2


class GradeError(SocmError):
    exit_code = 2


class KernelInvariantError(SocmError):
    """Integrality, grade-pattern or mirror violation while computing a SOCM."""

    exit_code = 1


class DatasetError(SocmError):
    exit_code = 2


class GraphError(SocmError):
    exit_code = 1


class FakeDataError(SocmError):
    exit_code = 1


class TrainingDivergedError(SocmError):
    exit_code = 1


class VerificationFailed(SocmError):
    exit_code = 1
