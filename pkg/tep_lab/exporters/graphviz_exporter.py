"""Exportador de programas e tracos para formato GraphViz DOT."""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Any

from tep_lab.analyzers.pebbling_algorithm import AnalysisTrace
from tep_lab.core.program import BranchingProgram, Output
from tep_lab.core.tree import Leaf

logger = logging.getLogger(__name__)

NODE_STYLES = {
    "leaf": {
        "shape": "ellipse",
        "style": "filled",
        "fillcolor": "#90EE90",
        "fontcolor": "black",
    },
    "func": {
        "shape": "box",
        "style": "filled",
        "fillcolor": "#4A90D9",
        "fontcolor": "white",
    },
    "output": {
        "shape": "doublecircle",
        "style": "filled",
        "fillcolor": "#FFD700",
        "fontcolor": "black",
    },
}


def _attrs(attrs: dict[str, Any]) -> str:
    return " ".join(f'{k}="{v}"' for k, v in attrs.items())


class GraphvizExporter:
    """Gera DOT de um programa, com destaque opcional de estados."""

    def __init__(self, bp: BranchingProgram) -> None:
        self.bp = bp

    def _kind(self, state: int) -> str:
        label = self.bp.label(state)
        if isinstance(label, Output):
            return "output"
        return "leaf" if isinstance(label, Leaf) else "func"

    def to_dot(
        self,
        title: str = "Branching Program",
        highlight_states: set[int] | None = None,
        rankdir: str = "TB",
    ) -> str:
        lines: list[str] = []
        lines.append(f'digraph "{title}" {{')
        lines.append(f"  rankdir={rankdir};")
        lines.append('  node [fontname="Helvetica" fontsize=10];')
        lines.append('  edge [color="#666666"];')
        lines.append("")

        for state in self.bp.states:
            attrs = dict(NODE_STYLES[self._kind(state)])
            if highlight_states and state in highlight_states:
                attrs["penwidth"] = "3"
                attrs["color"] = "red"
            marker = " (inicio)" if state == self.bp.start else ""
            attrs["label"] = f"s{state}: {self.bp.label(state)}{marker}"
            lines.append(f'  "s{state}" [{_attrs(attrs)}];')

        lines.append("")
        for source, label, target in self.bp.edges():
            lines.append(f'  "s{source}" -> "s{target}" [label="{label}"];')

        lines.append("}")
        return "\n".join(lines)

    def export_to_file(self, filepath: Path, **kwargs: Any) -> None:
        dot_content = self.to_dot(**kwargs)
        filepath.parent.mkdir(parents=True, exist_ok=True)
        with open(filepath, "w", encoding="utf-8") as f:
            f.write(dot_content)
        logger.info("GraphViz exportado: %s", filepath)


def trace_to_dot(trace: AnalysisTrace, supercritical: int | None = None) -> str:
    """Caminho como cadeia de estados, cada um com sua configuracao de pebbles."""
    path = trace.path
    lines: list[str] = []
    lines.append('digraph "Trace" {')
    lines.append("  rankdir=LR;")
    lines.append('  node [fontname="Helvetica" fontsize=10 shape="box"];')
    lines.append("")
    for index, state in enumerate(path.states):
        config = trace.configurations[index]
        query = path.queries[index]
        head = f"s{state}: {query}" if query is not None else f"s{state}: out={path.output}"
        pebbles = config.to_dict()
        black = " ".join(pebbles["black"])
        grey = " ".join(pebbles["grey"])
        attrs: dict[str, Any] = {"label": f"{head}\\npretas: {black}\\ncinzas: {grey}"}
        if supercritical is not None and index == supercritical:
            attrs["penwidth"] = "3"
            attrs["color"] = "red"
        lines.append(f'  "t{index}" [{_attrs(attrs)}];')
    lines.append("")
    for index in range(len(path) - 1):
        lines.append(f'  "t{index}" -> "t{index + 1}" [label="{path.labels[index]}"];')
    lines.append("}")
    return "\n".join(lines)
