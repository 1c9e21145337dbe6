"""Exportador de instancias, programas, sequencias e relatorios para JSON."""

from __future__ import annotations

import json
import logging
import os
import tempfile
from dataclasses import asdict, is_dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any

from tep_lab.core.log_value import LogValue
from tep_lab.core.program import BranchingProgram, Output, StateLabel
from tep_lab.core.tree import Func, Leaf, TepInstance

logger = logging.getLogger(__name__)


class DataclassEncoder(json.JSONEncoder):
    """Encoder JSON para dataclasses, fracoes, LogValue e conjuntos."""

    def default(self, obj: Any) -> Any:
        if hasattr(obj, "to_dict") and callable(obj.to_dict):
            return obj.to_dict()
        if isinstance(obj, Fraction):
            return str(obj)
        if isinstance(obj, LogValue):
            return f"log{obj.base}({obj.ratio})"
        if is_dataclass(obj) and not isinstance(obj, type):
            return asdict(obj)
        if isinstance(obj, Path):
            return str(obj)
        if isinstance(obj, (set, frozenset)):
            return sorted(obj)
        return super().default(obj)


def label_to_dict(label: StateLabel) -> dict[str, Any]:
    if isinstance(label, Leaf):
        return {"kind": "leaf", "node": label.node}
    if isinstance(label, Func):
        return {"kind": "func", "node": label.node, "x": label.x, "y": label.y}
    if isinstance(label, Output):
        return {"kind": "output", "value": label.value}
    raise TypeError(f"Rotulo desconhecido: {label!r}")


class JsonExporter:
    """Serializa os artefatos do laboratorio nos formatos documentados."""

    def __init__(self, indent: int = 2) -> None:
        self.indent = indent

    def export_instance(self, instance: TepInstance) -> dict[str, Any]:
        shape = instance.shape
        return {
            "h": shape.h,
            "k": instance.k,
            "leaves": [instance.leaf_value(i) for i in shape.leaves],
            "tables": {
                str(node): [list(row) for row in instance.table(node)]
                for node in shape.internal_nodes
            },
        }

    def export_program(self, bp: BranchingProgram) -> dict[str, Any]:
        data: dict[str, Any] = {
            "k": bp.k,
            "h": bp.shape.h,
            "start": bp.start,
            "states": [
                {"id": state, "query": label_to_dict(bp.label(state))} for state in bp.states
            ],
            "edges": [
                {"from": source, "label": label, "to": target}
                for source, label, target in bp.edges()
            ],
        }
        if bp.layers:
            data["layers"] = [
                {
                    "step": layer.step,
                    "pebbles": layer.pebbles,
                    "width": layer.width,
                    "query_kind": layer.query_kind,
                    "states": list(layer.states),
                }
                for layer in bp.layers
            ]
        return data

    def export_to_string(self, data: Any) -> str:
        """Texto JSON deterministico (chaves na ordem de insercao)."""
        return json.dumps(data, indent=self.indent, cls=DataclassEncoder, ensure_ascii=False)

    def export_to_file(self, data: Any, filepath: Path) -> None:
        """Escreve em arquivo temporario no mesmo diretorio e substitui o destino."""
        filepath = Path(filepath)
        filepath.parent.mkdir(parents=True, exist_ok=True)
        content = self.export_to_string(data) + "\n"
        fd, tmp_name = tempfile.mkstemp(dir=filepath.parent, prefix=f".{filepath.name}.")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as f:
                f.write(content)
            os.replace(tmp_name, filepath)
        except BaseException:
            Path(tmp_name).unlink(missing_ok=True)
            raise
        logger.info("Exportado para: %s", filepath)
