"""Tipos de resultado dos validadores e verificadores."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any

from tep_lab.core.tree import TepInstance, instance_index


class Severity(Enum):
    """Severidade de um problema estrutural."""

    ERROR = "error"
    WARNING = "warning"
    INFO = "info"


@dataclass
class StructureIssue:
    """Defeito estrutural com os estados/arestas envolvidos."""

    rule: str
    message: str
    severity: Severity = Severity.ERROR
    states: list[int] = field(default_factory=list)
    edges: list[tuple[int, int, int]] = field(default_factory=list)


@dataclass
class StructureReport:
    """Resultado de validate_bp."""

    issues: list[StructureIssue] = field(default_factory=list)
    acyclic: bool = True
    deterministic: bool = False

    @property
    def valid(self) -> bool:
        return not any(issue.severity is Severity.ERROR for issue in self.issues)

    def rules_failed(self) -> list[str]:
        return sorted({i.rule for i in self.issues if i.severity is Severity.ERROR})

    def to_dict(self) -> dict[str, Any]:
        return {
            "valid": self.valid,
            "acyclic": self.acyclic,
            "deterministic": self.deterministic,
            "issues": [
                {
                    "rule": i.rule,
                    "severity": i.severity.value,
                    "message": i.message,
                    "states": i.states,
                    "edges": [list(e) for e in i.edges],
                }
                for i in self.issues
            ],
        }


def _plain(value: Any) -> Any:
    if isinstance(value, TepInstance):
        return {"index": instance_index(value), "values": list(value.values)}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (int, str, bool)) or value is None:
        return value
    return str(value)


@dataclass
class RestrictionVerdict:
    """Passa/falha de uma propriedade, com testemunha quando falha.

    Em modo "sampled" uma aprovacao e apenas indicativa; uma falha e definitiva.
    """

    property: str
    passed: bool
    witness: dict[str, Any] | None = None
    mode: str = "exhaustive"
    instances_checked: int = 0
    message: str = ""

    def __bool__(self) -> bool:
        return self.passed

    @property
    def advisory(self) -> bool:
        return self.passed and self.mode == "sampled"

    def to_dict(self) -> dict[str, Any]:
        return {
            "property": self.property,
            "passed": self.passed,
            "mode": self.mode,
            "instances_checked": self.instances_checked,
            "message": self.message,
            "witness": _plain(self.witness) if self.witness is not None else None,
        }
