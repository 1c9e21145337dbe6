"""Modulos de exportacao para diferentes formatos."""

from tep_lab.exporters.graphviz_exporter import GraphvizExporter
from tep_lab.exporters.json_exporter import JsonExporter

__all__ = [
    "GraphvizExporter",
    "JsonExporter",
]
