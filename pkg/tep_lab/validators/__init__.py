"""Validadores de estrutura e de restricoes de programas ramificados."""

from tep_lab.validators.structure_validator import StructureValidator, validate_bp
from tep_lab.validators.verdict import RestrictionVerdict, StructureReport

__all__ = [
    "RestrictionVerdict",
    "StructureReport",
    "StructureValidator",
    "validate_bp",
]
