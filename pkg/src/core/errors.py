from __future__ import annotations

from typing import TYPE_CHECKING, Optional

if TYPE_CHECKING:
    from .models import ValidationReport


class QBCError(Exception):
    """Base error; `stage` names the pipeline step that failed."""

    stage = "qbc"
    exit_code = 1

    def __init__(self, message: str, stage: Optional[str] = None):
        super().__init__(message)
        if stage is not None:
            self.stage = stage

    def __str__(self) -> str:
        return f"[{self.stage}] {super().__str__()}"


class NetParseError(QBCError):
    stage = "parse"
    exit_code = 2


class NetValidationError(QBCError):
    stage = "validate"
    exit_code = 3

    def __init__(self, report: "ValidationReport"):
        super().__init__("; ".join(v.message for v in report.violations) or "invalid net")
        self.report = report


class CompileError(QBCError):
    stage = "compile"
    exit_code = 4


class SchemaMismatchError(CompileError):
    stage = "matrices"


class OracleCapError(QBCError):
    stage = "oracle"
