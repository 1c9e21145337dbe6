"""Configuracoes e movimentos dos jogos de pebbling em T^h_2."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Any, Union

from tep_lab.core.log_value import LogValue
from tep_lab.core.tree import TreeShape
from tep_lab.errors import IllegalMoveError

logger = logging.getLogger(__name__)

# Quantidade de pebble: Fraction nos jogos, LogValue nos cronogramas de valores de estado.
Amount = Union[int, Fraction, LogValue]


class Game(Enum):
    """Variantes do jogo."""

    BLACK = "black"
    WHOLE = "whole"
    FRACTIONAL = "fractional"


def format_amount(value: Amount) -> str:
    return str(value)


@dataclass(frozen=True)
class PebbleConfiguration:
    """Valores b(i), w(i) nao nulos, ordenados por no."""

    game: Game
    h: int
    entries: tuple[tuple[int, Amount, Amount], ...] = ()
    denominator: int | None = None

    @classmethod
    def empty(
        cls, game: Game, h: int, denominator: int | None = None
    ) -> PebbleConfiguration:
        return cls(game, h, (), denominator)

    @classmethod
    def from_values(
        cls,
        game: Game,
        h: int,
        values: dict[int, tuple[Amount, Amount]],
        denominator: int | None = None,
    ) -> PebbleConfiguration:
        entries = tuple(
            (node, b, w) for node, (b, w) in sorted(values.items()) if not (b == 0 and w == 0)
        )
        return cls(game, h, entries, denominator)

    @cached_property
    def _values(self) -> dict[int, tuple[Amount, Amount]]:
        return {node: (b, w) for node, b, w in self.entries}

    def b(self, node: int) -> Amount:
        return self._values.get(node, (0, 0))[0]

    def w(self, node: int) -> Amount:
        return self._values.get(node, (0, 0))[1]

    def values(self) -> dict[int, tuple[Amount, Amount]]:
        return dict(self._values)

    @property
    def cost(self) -> Amount:
        total: Amount = 0
        for _, b, w in self.entries:
            total = total + b + w
        return total

    @property
    def pebbled_nodes(self) -> tuple[int, ...]:
        return tuple(node for node, _, _ in self.entries)

    @property
    def black_nodes(self) -> tuple[int, ...]:
        return tuple(node for node, b, _ in self.entries if b > 0)

    @property
    def white_nodes(self) -> tuple[int, ...]:
        return tuple(node for node, _, w in self.entries if w > 0)

    def is_empty(self) -> bool:
        return not self.entries

    def is_fully_pebbled(self, node: int) -> bool:
        return self.b(node) + self.w(node) == 1

    def with_values(self, node: int, b: Amount, w: Amount) -> PebbleConfiguration:
        values = self.values()
        values[node] = (b, w)
        return PebbleConfiguration.from_values(self.game, self.h, values, self.denominator)

    def __str__(self) -> str:
        parts: list[str] = []
        for node, b, w in self.entries:
            if self.game is Game.FRACTIONAL:
                parts.append(f"{node}:(b={b},w={w})")
                continue
            if b > 0:
                parts.append(f"b{node}")
            if w > 0:
                parts.append(f"w{node}")
        return "{" + ",".join(parts) + "}"


@dataclass(frozen=True)
class PlaceBlackLeaf:
    node: int
    kind = "place-black-leaf"


@dataclass(frozen=True)
class BlackSlide:
    node: int
    cleared: frozenset[int] = frozenset()
    kind = "black-slide"


@dataclass(frozen=True)
class RemovePebble:
    node: int
    kind = "remove-pebble"


@dataclass(frozen=True)
class IncreaseWhite:
    node: int
    amount: Amount = 1
    kind = "increase-white"


@dataclass(frozen=True)
class DecreaseBlack:
    node: int
    amount: Amount = 1
    kind = "decrease-black"


@dataclass(frozen=True)
class IncreaseBlack:
    """Folha: regra livre. No interno: filhos cheios, com reducoes simultaneas de b."""

    node: int
    amount: Amount = 1
    child_decreases: tuple[tuple[int, Amount], ...] = field(default=())
    kind = "increase-black"


@dataclass(frozen=True)
class DecreaseWhite:
    node: int
    amount: Amount = 1
    kind = "decrease-white"


PebbleMove = Union[
    PlaceBlackLeaf,
    BlackSlide,
    RemovePebble,
    IncreaseWhite,
    DecreaseBlack,
    IncreaseBlack,
    DecreaseWhite,
]

BLACK_GAME_MOVES = (PlaceBlackLeaf, BlackSlide, RemovePebble)

QUERY_MOVES = (PlaceBlackLeaf, BlackSlide, IncreaseBlack, DecreaseWhite)


def move_amounts(move: PebbleMove) -> list[Amount]:
    amounts: list[Amount] = []
    if isinstance(move, (IncreaseWhite, DecreaseBlack, IncreaseBlack, DecreaseWhite)):
        amounts.append(move.amount)
    if isinstance(move, IncreaseBlack):
        amounts.extend(amount for _, amount in move.child_decreases)
    return amounts


def _check_amounts(config: PebbleConfiguration, move: PebbleMove) -> None:
    for amount in move_amounts(move):
        if not amount > 0:
            raise IllegalMoveError("positive-amount", move, f"quantidade {amount}")
        if config.game is Game.WHOLE and amount != 1:
            raise IllegalMoveError("whole-unit-amounts", move, f"quantidade {amount}")
        if config.game is Game.FRACTIONAL and config.denominator is not None:
            if isinstance(amount, LogValue) or (Fraction(amount) * config.denominator) % 1:
                raise IllegalMoveError(
                    "granularity", move, f"{amount} nao e multiplo de 1/{config.denominator}"
                )


def _children_full(config: PebbleConfiguration, shape: TreeShape, node: int) -> bool:
    return all(config.is_fully_pebbled(child) for child in shape.children(node))


def apply_move(config: PebbleConfiguration, move: PebbleMove) -> PebbleConfiguration:
    """Aplica o movimento ou levanta IllegalMoveError com a regra violada."""
    shape = TreeShape(config.h)
    node = move.node
    if not shape.contains(node):
        raise IllegalMoveError("node-exists", move, f"no {node} fora de T^{config.h}_2")
    if config.game is Game.BLACK and not isinstance(move, BLACK_GAME_MOVES):
        raise IllegalMoveError("black-game-moves", move, "jogo preto aceita so pretas")
    _check_amounts(config, move)
    b, w = config.b(node), config.w(node)

    if isinstance(move, PlaceBlackLeaf):
        if not shape.is_leaf(node):
            raise IllegalMoveError("place-on-leaf", move)
        if b != 0 or w != 0:
            raise IllegalMoveError("node-unpebbled", move)
        return config.with_values(node, 1, 0)

    if isinstance(move, BlackSlide):
        if not shape.is_internal(node):
            raise IllegalMoveError("slide-on-internal", move)
        if not move.cleared <= set(shape.children(node)):
            raise IllegalMoveError("clear-children-only", move)
        if not _children_full(config, shape, node):
            raise IllegalMoveError("children-fully-pebbled", move)
        if b != 0 or w != 0:
            raise IllegalMoveError("node-unpebbled", move)
        result = config.with_values(node, 1, 0)
        for child in sorted(move.cleared):
            if config.b(child) != 1:
                raise IllegalMoveError("clear-black-only", move, f"filho {child} sem preta")
            result = result.with_values(child, 0, config.w(child))
        return result

    if isinstance(move, RemovePebble):
        if not b > 0:
            raise IllegalMoveError("remove-black-pebble", move)
        return config.with_values(node, 0, w)

    if isinstance(move, IncreaseWhite):
        if not b + w + move.amount <= 1:
            raise IllegalMoveError("bounds", move, "b + w excederia 1")
        return config.with_values(node, b, w + move.amount)

    if isinstance(move, DecreaseBlack):
        if not move.amount <= b:
            raise IllegalMoveError("bounds", move, "b ficaria negativo")
        return config.with_values(node, b - move.amount, w)

    if isinstance(move, IncreaseBlack):
        if not b + w + move.amount <= 1:
            raise IllegalMoveError("bounds", move, "b + w excederia 1")
        if shape.is_leaf(node):
            if move.child_decreases:
                raise IllegalMoveError("leaf-has-no-children", move)
            return config.with_values(node, b + move.amount, w)
        if not _children_full(config, shape, node):
            raise IllegalMoveError("children-fully-pebbled", move)
        result = config.with_values(node, b + move.amount, w)
        children = set(shape.children(node))
        for child, amount in move.child_decreases:
            if child not in children:
                raise IllegalMoveError("clear-children-only", move)
            if not amount <= config.b(child):
                raise IllegalMoveError("bounds", move, f"filho {child} com b insuficiente")
            result = result.with_values(child, config.b(child) - amount, config.w(child))
        return result

    if isinstance(move, DecreaseWhite):
        if not move.amount <= w:
            raise IllegalMoveError("bounds", move, "w ficaria negativo")
        if shape.is_internal(node) and not _children_full(config, shape, node):
            raise IllegalMoveError("children-fully-pebbled", move)
        return config.with_values(node, b, w - move.amount)

    raise IllegalMoveError("unknown-move", move)


def _diff(
    before: PebbleConfiguration, after: PebbleConfiguration
) -> dict[int, tuple[Amount, Amount]]:
    changes: dict[int, tuple[Amount, Amount]] = {}
    for node in set(before.pebbled_nodes) | set(after.pebbled_nodes):
        db = after.b(node) - before.b(node)
        dw = after.w(node) - before.w(node)
        if db != 0 or dw != 0:
            changes[node] = (db, dw)
    return changes


def infer_move(before: PebbleConfiguration, after: PebbleConfiguration) -> PebbleMove | None:
    """Movimento unico que leva `before` a `after`, se houver (sem checar legalidade)."""
    changes = _diff(before, after)
    if not changes:
        return None
    shape = TreeShape(before.h)
    if before.game is Game.BLACK:
        return _infer_black(shape, changes)

    if len(changes) == 1:
        ((node, (db, dw)),) = changes.items()
        if dw == 0 and db > 0:
            return IncreaseBlack(node, db)
        if dw == 0 and db < 0:
            return DecreaseBlack(node, -db)
        if db == 0 and dw > 0:
            return IncreaseWhite(node, dw)
        if db == 0 and dw < 0:
            return DecreaseWhite(node, -dw)
        return None

    raised = [n for n, (db, dw) in changes.items() if db > 0 and dw == 0]
    if len(raised) != 1 or not shape.is_internal(raised[0]):
        return None
    parent = raised[0]
    children = set(shape.children(parent))
    decreases: list[tuple[int, Amount]] = []
    for node, (db, dw) in sorted(changes.items()):
        if node == parent:
            continue
        if node not in children or dw != 0 or not db < 0:
            return None
        decreases.append((node, -db))
    return IncreaseBlack(parent, changes[parent][0], tuple(decreases))


def _infer_black(shape: TreeShape, changes: dict[int, tuple[Amount, Amount]]) -> PebbleMove | None:
    added = [n for n, (db, _) in changes.items() if db > 0]
    removed = [n for n, (db, _) in changes.items() if db < 0]
    if len(added) == 1 and not removed and shape.is_leaf(added[0]):
        return PlaceBlackLeaf(added[0])
    if len(added) == 1 and shape.is_internal(added[0]):
        if set(removed) <= set(shape.children(added[0])):
            return BlackSlide(added[0], frozenset(removed))
        return None
    if not added and len(removed) == 1:
        return RemovePebble(removed[0])
    return None


def move_to_dict(move: PebbleMove) -> dict[str, Any]:
    data: dict[str, Any] = {"kind": move.kind, "node": move.node}
    if isinstance(move, BlackSlide):
        data["cleared"] = sorted(move.cleared)
    if isinstance(move, (IncreaseWhite, DecreaseBlack, IncreaseBlack, DecreaseWhite)):
        data["amount"] = format_amount(move.amount)
    if isinstance(move, IncreaseBlack) and move.child_decreases:
        data["children"] = [
            {"node": child, "amount": format_amount(amount)}
            for child, amount in move.child_decreases
        ]
    return data
