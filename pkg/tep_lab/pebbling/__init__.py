"""Jogos de pebbling preto, branco-preto inteiro e fracionario."""

from tep_lab.pebbling.configuration import Game, PebbleConfiguration, apply_move
from tep_lab.pebbling.sequence import PebbleSequence, validate_sequence

__all__ = [
    "Game",
    "PebbleConfiguration",
    "PebbleSequence",
    "apply_move",
    "validate_sequence",
]
