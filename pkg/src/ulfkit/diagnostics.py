"""Path-addressed diagnostics shared by the reader, type system, and checker."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .expr import Path, UlfExpr

ERROR = "error"
WARNING = "warning"
NOTE = "note"

_SEVERITY_ORDER = {ERROR: 0, WARNING: 1, NOTE: 2}


@dataclass
class Diagnostic:
    path: Path
    severity: str
    code: str
    message: str
    suggestion: Optional[UlfExpr] = None
    offset: Optional[int] = None  # source character offset, parse errors only

    def is_error(self) -> bool:
        return self.severity == ERROR

    def to_record(self) -> dict:
        from .reader import print_expr
        return {
            "path": list(self.path),
            "severity": self.severity,
            "code": self.code,
            "message": self.message,
            "suggestion": print_expr(self.suggestion) if self.suggestion is not None else None,
            "offset": self.offset,
        }


def has_errors(diags: list[Diagnostic]) -> bool:
    return any(d.is_error() for d in diags)


def sort_diags(diags: list[Diagnostic]) -> list[Diagnostic]:
    return sorted(diags, key=lambda d: (d.path, _SEVERITY_ORDER.get(d.severity, 3), d.code))


class UlfError(Exception):
    """Raised by operations whose failure is a single diagnostic."""

    def __init__(self, diagnostic: Diagnostic):
        super().__init__(diagnostic.message)
        self.diagnostic = diagnostic

    @classmethod
    def at(cls, code: str, message: str, path: Path = (),
           offset: int | None = None) -> "UlfError":
        return cls(Diagnostic(path=path, severity=ERROR, code=code,
                              message=message, offset=offset))
