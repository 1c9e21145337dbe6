"""Sequencias de pebbling: validacao, custo maximo e estrategia preta otima."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from tep_lab.core.tree import TreeShape
from tep_lab.errors import IllegalMoveError
from tep_lab.pebbling.configuration import (
    Amount,
    BlackSlide,
    Game,
    PebbleConfiguration,
    PebbleMove,
    PlaceBlackLeaf,
    apply_move,
    infer_move,
    move_to_dict,
)

logger = logging.getLogger(__name__)


@dataclass
class SequenceVerdict:
    """Resultado de validate_sequence."""

    valid: bool
    first_illegal_index: int | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.valid


@dataclass
class PebbleSequence:
    """Configuracoes com o movimento entre cada par adjacente.

    `markers` associa indice de configuracao a um marcador externo
    (indice de estado no caminho, usado pelas analises de traco).
    """

    game: Game
    h: int
    configurations: list[PebbleConfiguration]
    moves: list[PebbleMove | None] = field(default_factory=list)
    denominator: int | None = None
    markers: dict[int, Any] = field(default_factory=dict)

    @classmethod
    def start(cls, game: Game, h: int, denominator: int | None = None) -> PebbleSequence:
        return cls(game, h, [PebbleConfiguration.empty(game, h, denominator)], [], denominator)

    @classmethod
    def from_configurations(
        cls,
        game: Game,
        h: int,
        configurations: list[PebbleConfiguration],
        denominator: int | None = None,
    ) -> PebbleSequence:
        """Reconstroi os movimentos entre configuracoes consecutivas."""
        moves = [infer_move(a, b) for a, b in zip(configurations, configurations[1:])]
        return cls(game, h, list(configurations), moves, denominator)

    @property
    def last(self) -> PebbleConfiguration:
        return self.configurations[-1]

    def __len__(self) -> int:
        return len(self.configurations)

    @property
    def move_count(self) -> int:
        return len(self.moves)

    def apply(self, move: PebbleMove, marker: Any = None) -> PebbleConfiguration:
        """Aplica um movimento ao fim da sequencia (IllegalMoveError se ilegal)."""
        config = apply_move(self.last, move)
        self.configurations.append(config)
        self.moves.append(move)
        if marker is not None:
            self.markers[len(self.configurations) - 1] = marker
        return config

    def mark(self, marker: Any) -> None:
        """Associa a configuracao atual ao marcador."""
        self.markers[len(self.configurations) - 1] = marker

    def configuration_at_marker(self, marker: Any) -> PebbleConfiguration | None:
        """Ultima configuracao associada ao marcador."""
        found = [i for i, m in self.markers.items() if m == marker]
        return self.configurations[max(found)] if found else None

    def to_dict(self) -> dict[str, Any]:
        return {
            "game": self.game.value,
            "h": self.h,
            "d": self.denominator,
            "configs": [
                {str(node): {"b": str(b), "w": str(w)} for node, b, w in config.entries}
                for config in self.configurations
            ],
            "moves": [move_to_dict(m) if m is not None else None for m in self.moves],
            "markers": {str(i): m for i, m in sorted(self.markers.items())},
        }


def _boundary_failure(seq: PebbleSequence) -> SequenceVerdict | None:
    first, last = seq.configurations[0], seq.configurations[-1]
    if not first.is_empty():
        return SequenceVerdict(False, 0, "primeira configuracao nao e vazia")
    if seq.game is Game.BLACK:
        if last.entries != ((1, 1, 0),):
            return SequenceVerdict(
                False, len(seq) - 1, "ultima configuracao nao e uma unica preta na raiz"
            )
        return None
    if not last.is_empty():
        return SequenceVerdict(False, len(seq) - 1, "sequencia deve comecar e terminar vazia")
    if not any(config.b(1) == 1 for config in seq.configurations):
        return SequenceVerdict(False, len(seq) - 1, "raiz nunca recebe preta cheia")
    return None


def validate_sequence(seq: PebbleSequence) -> SequenceVerdict:
    """Verifica condicoes de inicio/fim do jogo e cada transicao."""
    if not seq.configurations:
        return SequenceVerdict(False, 0, "sequencia vazia")
    if len(seq.moves) != len(seq.configurations) - 1:
        return SequenceVerdict(False, 0, "numero de movimentos nao bate com configuracoes")

    for index, (move, after) in enumerate(zip(seq.moves, seq.configurations[1:]), start=1):
        before = seq.configurations[index - 1]
        if move is None:
            return SequenceVerdict(False, index, "nenhum movimento unico leva a configuracao")
        try:
            result = apply_move(before, move)
        except IllegalMoveError as exc:
            return SequenceVerdict(False, index, f"movimento ilegal: {exc.rule}")
        if result != after:
            return SequenceVerdict(False, index, "configuracao diverge do movimento declarado")

    failure = _boundary_failure(seq)
    if failure is not None:
        return failure
    return SequenceVerdict(True)


def max_pebbles(seq: PebbleSequence) -> Amount:
    """Maior custo total entre as configuracoes."""
    best: Amount = Fraction(0)
    for config in seq.configurations:
        cost = config.cost
        if isinstance(cost, int):
            cost = Fraction(cost)
        if cost > best:
            best = cost
    return best


def optimal_black_sequence(h: int) -> PebbleSequence:
    """Estrategia recursiva com h pebbles: subarvore esquerda, direita, deslize."""
    shape = TreeShape(h)
    seq = PebbleSequence.start(Game.BLACK, h)

    def pebble(node: int) -> None:
        if shape.is_leaf(node):
            seq.apply(PlaceBlackLeaf(node))
            return
        left, right = shape.children(node)
        pebble(left)
        pebble(right)
        seq.apply(BlackSlide(node, frozenset((left, right))))

    pebble(1)
    logger.debug("Sequencia preta otima h=%d: %d movimentos", h, seq.move_count)
    return seq
