"""Compilacao de sequencias de pebbling em programas ramificados."""

from tep_lab.synthesis.compiler import compile_black, compile_bw
from tep_lab.synthesis.size_report import SizeReport, size_report

__all__ = [
    "SizeReport",
    "compile_black",
    "compile_bw",
    "size_report",
]
