"""Leitura dos formatos de arquivo."""

from tep_lab.parsers.json_loader import JsonLoader

__all__ = [
    "JsonLoader",
]
