"""Busca do numero minimo de pebbles por aprofundamento de orcamento."""

from __future__ import annotations

import itertools
import logging
from collections import deque
from collections.abc import Iterator
from dataclasses import dataclass
from fractions import Fraction

from tep_lab.config import LabSettings, load_settings
from tep_lab.core.tree import TreeShape
from tep_lab.errors import BudgetExceededError
from tep_lab.pebbling.configuration import (
    BlackSlide,
    DecreaseBlack,
    DecreaseWhite,
    Game,
    IncreaseBlack,
    IncreaseWhite,
    PebbleMove,
    PlaceBlackLeaf,
    RemovePebble,
)
from tep_lab.pebbling.sequence import PebbleSequence, max_pebbles

logger = logging.getLogger(__name__)

# Configuracao compacta: (b, w) por no em unidades de 1/d, indice = no - 1.
Compact = tuple[tuple[int, int], ...]
# Movimento compacto: (tipo, no, quantidade, reducoes nos filhos).
CompactMove = tuple[str, int, int, tuple[tuple[int, int], ...]]

_RAISING = frozenset({"place", "slide", "incb", "incw"})


def _cost_delta(move: CompactMove) -> int:
    kind, _, amount, decreases = move
    if kind in _RAISING:
        return amount - sum(d for _, d in decreases)
    return -amount


@dataclass
class SearchResult:
    """Minimo encontrado e testemunha."""

    game: Game
    h: int
    denominator: int | None
    minimum: Fraction
    witness: PebbleSequence
    budgets_tried: list[Fraction]
    states_visited: int


class PebbleSearch:
    """BFS sobre (configuracao, raiz-ja-preta) para um orcamento fixo."""

    def __init__(self, game: Game, h: int, denominator: int = 1) -> None:
        self.game = game
        self.shape = TreeShape(h)
        self.unit = 1 if game in (Game.BLACK, Game.WHOLE) else denominator
        self.size = self.shape.node_count
        self.visited = 0

    def _canonical(self, config: Compact, node: int = 1) -> tuple:
        value = config[node - 1]
        if self.shape.is_leaf(node):
            return (value,)
        left, right = self.shape.children(node)
        a = self._canonical(config, left)
        b = self._canonical(config, right)
        return (value, a, b) if a <= b else (value, b, a)

    def _full(self, config: Compact, node: int) -> bool:
        b, w = config[node - 1]
        return b + w == self.unit

    def _moves(self, config: Compact) -> Iterator[CompactMove]:
        unit = self.unit
        for node in self.shape.nodes:
            b, w = config[node - 1]
            free = unit - b - w
            if self.game is Game.BLACK:
                if self.shape.is_leaf(node) and b == 0:
                    yield ("place", node, unit, ())
                if self.shape.is_internal(node) and b == 0 and w == 0:
                    left, right = self.shape.children(node)
                    if config[left - 1][0] == unit and config[right - 1][0] == unit:
                        yield ("slide", node, unit, ((left, unit), (right, unit)))
                        yield ("slide", node, unit, ((right, unit),))
                        yield ("slide", node, unit, ((left, unit),))
                        yield ("slide", node, unit, ())
                if b == unit:
                    yield ("remove", node, unit, ())
                continue

            if free >= 1:
                yield ("incw", node, 1, ())
            if b >= 1:
                yield ("decb", node, 1, ())
            if self.shape.is_leaf(node):
                if free >= 1:
                    yield ("incb", node, 1, ())
                if w >= 1:
                    yield ("decw", node, 1, ())
                continue
            left, right = self.shape.children(node)
            if not (self._full(config, left) and self._full(config, right)):
                continue
            if w >= 1:
                yield ("decw", node, 1, ())
            bl, br = config[left - 1][0], config[right - 1][0]
            for amount in range(free, 0, -1):
                for dl, dr in itertools.product(range(bl, -1, -1), range(br, -1, -1)):
                    decreases = tuple(
                        (child, d) for child, d in ((left, dl), (right, dr)) if d > 0
                    )
                    yield ("incb", node, amount, decreases)

    @staticmethod
    def _apply(config: Compact, move: CompactMove) -> Compact:
        kind, node, amount, decreases = move
        values = list(config)
        b, w = values[node - 1]
        if kind in ("place", "slide", "incb"):
            values[node - 1] = (b + amount, w)
        elif kind in ("remove", "decb"):
            values[node - 1] = (b - amount, w)
        elif kind == "incw":
            values[node - 1] = (b, w + amount)
        elif kind == "decw":
            values[node - 1] = (b, w - amount)
        for child, d in decreases:
            cb, cw = values[child - 1]
            values[child - 1] = (cb - d, cw)
        return tuple(values)

    def _goal(self, config: Compact, root_done: bool) -> bool:
        if self.game is Game.BLACK:
            return config[0] == (self.unit, 0) and all(v == (0, 0) for v in config[1:])
        return root_done and all(v == (0, 0) for v in config)

    def run(
        self, budget_units: int, state_cap: int
    ) -> tuple[list[Compact], list[CompactMove]] | None:
        """Sequencia mais curta com custo <= orcamento, ou None."""
        empty: Compact = tuple((0, 0) for _ in range(self.size))
        start_key = (self._canonical(empty), False)
        parents: dict[tuple, tuple[tuple | None, CompactMove | None, Compact, bool]] = {
            start_key: (None, None, empty, False)
        }
        queue: deque[tuple[Compact, bool, tuple]] = deque([(empty, False, start_key)])
        while queue:
            config, root_done, key = queue.popleft()
            if self._goal(config, root_done):
                self.visited = len(parents)
                return self._rebuild(parents, key)
            cost = sum(b + w for b, w in config)
            for move in self._moves(config):
                if cost + _cost_delta(move) > budget_units:
                    continue
                nxt = self._apply(config, move)
                flag = root_done or nxt[0][0] == self.unit
                nxt_key = (self._canonical(nxt), flag)
                if nxt_key in parents:
                    continue
                parents[nxt_key] = (key, move, nxt, flag)
                if len(parents) > state_cap:
                    raise BudgetExceededError(
                        f"Busca excedeu {state_cap} estados", limit=state_cap
                    )
                queue.append((nxt, flag, nxt_key))
        self.visited = len(parents)
        return None

    @staticmethod
    def _rebuild(
        parents: dict[tuple, tuple[tuple | None, CompactMove | None, Compact, bool]], key: tuple
    ) -> tuple[list[Compact], list[CompactMove]]:
        configs: list[Compact] = []
        moves: list[CompactMove] = []
        current: tuple | None = key
        while current is not None:
            parent, move, config, _ = parents[current]
            configs.append(config)
            if move is not None:
                moves.append(move)
            current = parent
        configs.reverse()
        moves.reverse()
        return configs, moves

    def to_sequence(
        self, moves: list[CompactMove], denominator: int | None
    ) -> PebbleSequence:
        """Converte movimentos compactos em movimentos reais, reaplicando as regras."""
        seq = PebbleSequence.start(self.game, self.shape.h, denominator)
        for move in moves:
            seq.apply(self._real_move(move))
        return seq

    def _real_move(self, move: CompactMove) -> PebbleMove:
        kind, node, amount, decreases = move
        value = Fraction(amount, self.unit)
        if kind == "place":
            return PlaceBlackLeaf(node)
        if kind == "slide":
            return BlackSlide(node, frozenset(child for child, _ in decreases))
        if kind == "remove":
            return RemovePebble(node)
        if kind == "incw":
            return IncreaseWhite(node, value)
        if kind == "decb":
            return DecreaseBlack(node, value)
        if kind == "decw":
            return DecreaseWhite(node, value)
        return IncreaseBlack(
            node,
            value,
            tuple((child, Fraction(d, self.unit)) for child, d in decreases),
        )


def min_pebble_number(
    game: Game,
    h: int,
    denominator: int = 2,
    settings: LabSettings | None = None,
) -> SearchResult:
    """Menor custo maximo de uma sequencia valida e uma testemunha.

    Preto e inteiro ignoram `denominator`; fracionario usa granularidade 1/d.
    O orcamento cresce de uma unidade (1 ou 1/d) ate existir sequencia valida.
    """
    settings = settings or load_settings()
    if denominator < 1:
        raise ValueError(f"Denominador deve ser >= 1: {denominator}")
    search = PebbleSearch(game, h, denominator)
    seq_denominator = denominator if game is Game.FRACTIONAL else None
    tried: list[Fraction] = []
    # A estrategia preta usa h pebbles, logo o orcamento nunca passa de h.
    for budget_units in range(search.unit, h * search.unit + 1):
        budget = Fraction(budget_units, search.unit)
        tried.append(budget)
        logger.info("Busca %s h=%d: orcamento %s", game.value, h, budget)
        found = search.run(budget_units, settings.search_state_cap)
        if found is None:
            continue
        _, moves = found
        witness = search.to_sequence(moves, seq_denominator)
        minimum = Fraction(max_pebbles(witness))
        logger.info("Minimo %s h=%d: %s (%d movimentos)", game.value, h, minimum, len(moves))
        return SearchResult(
            game, h, seq_denominator, minimum, witness, tried, search.visited
        )
    raise BudgetExceededError(f"Nenhuma sequencia com ate {h} pebbles", limit=h)
