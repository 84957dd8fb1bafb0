"""Uniform violation records returned by the report-style validators."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any


@dataclass(frozen=True)
class Violation:
    kind: str
    where: Any
    message: str

    def to_json(self) -> dict[str, Any]:
        return {"kind": self.kind, "where": _jsonable(self.where), "message": self.message}

    def __str__(self) -> str:
        return f"[{self.kind}] {self.message}"


def _jsonable(x: Any) -> Any:
    if isinstance(x, (tuple, list)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (str, int, bool)) or x is None:
        return x
    return str(x)
