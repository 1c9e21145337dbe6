"""Arvore, instancias, programas ramificados e semantica de execucao."""

from tep_lab.core.log_value import LogValue
from tep_lab.core.tree import Func, Leaf, TepInstance, TreeShape

__all__ = [
    "Func",
    "Leaf",
    "LogValue",
    "TepInstance",
    "TreeShape",
]
