"""Compilacao de sequencias de pebbling (preta e branco-preta inteira) em programas."""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field

from tep_lab.core.program import BranchingProgram, LayerInfo, Output
from tep_lab.core.tree import Func, Leaf, QueryId, TreeShape
from tep_lab.errors import CompilationError, IllegalMoveError
from tep_lab.pebbling.configuration import (
    BlackSlide,
    DecreaseBlack,
    DecreaseWhite,
    Game,
    IncreaseBlack,
    IncreaseWhite,
    PebbleConfiguration,
    PebbleMove,
    PlaceBlackLeaf,
    RemovePebble,
    apply_move,
)
from tep_lab.pebbling.sequence import PebbleSequence, validate_sequence

logger = logging.getLogger(__name__)

Memory = dict[int, int]


def is_query_move(move: PebbleMove) -> bool:
    return isinstance(move, (PlaceBlackLeaf, BlackSlide, IncreaseBlack, DecreaseWhite))


def _cleared_children(move: PebbleMove) -> tuple[int, ...]:
    if isinstance(move, BlackSlide):
        return tuple(sorted(move.cleared))
    if isinstance(move, IncreaseBlack):
        return tuple(child for child, _ in move.child_decreases)
    return ()


def needed_nodes(move: PebbleMove, shape: TreeShape) -> set[int]:
    """Nos cujo valor o movimento le ou altera."""
    nodes = {move.node}
    if shape.is_internal(move.node) and isinstance(
        move, (BlackSlide, IncreaseBlack, DecreaseWhite)
    ):
        nodes.update(shape.children(move.node))
    return nodes


def delay_white_placements(moves: list[PebbleMove], shape: TreeShape) -> list[PebbleMove]:
    """Adia cada IncreaseWhite ate o primeiro movimento que usa o no."""
    pending: list[PebbleMove] = []
    result: list[PebbleMove] = []
    for move in moves:
        if isinstance(move, IncreaseWhite):
            pending.append(move)
            continue
        needed = needed_nodes(move, shape)
        result.extend(p for p in pending if p.node in needed)
        pending = [p for p in pending if p.node not in needed]
        result.append(move)
    result.extend(pending)
    return result


def _first_query(moves: list[PebbleMove]) -> int | None:
    return next((i for i, m in enumerate(moves) if is_query_move(m)), None)


def resolve_leading_guesses(moves: list[PebbleMove], shape: TreeShape) -> list[PebbleMove]:
    """Branca em folha exigida pela primeira consulta vira preta colocada na folha.

    A verificacao correspondente passa a ser a remocao da preta. Brancas em nos
    internos continuam como palpites e ganham a camada de palpite do compilador.
    """
    first = _first_query(moves)
    if first is None:
        return moves
    needed = needed_nodes(moves[first], shape)
    guess = next(
        (
            i
            for i, m in enumerate(moves[:first])
            if isinstance(m, IncreaseWhite) and m.node in needed and shape.is_leaf(m.node)
        ),
        None,
    )
    if guess is None:
        return moves
    node = moves[guess].node
    result = list(moves)
    result[guess] = PlaceBlackLeaf(node)
    for i in range(first, len(result)):
        current = result[i]
        if isinstance(current, DecreaseWhite) and current.node == node:
            result[i] = RemovePebble(node)
            break
    return delay_white_placements(result, shape)


def delay_root_removal(moves: list[PebbleMove]) -> list[PebbleMove]:
    """Remocao da preta da raiz antes da ultima consulta passa para logo apos ela.

    So quando nenhum movimento entre as duas toca a raiz.
    """
    queries = [i for i, m in enumerate(moves) if is_query_move(m)]
    if not queries:
        return moves
    last = queries[-1]
    for index in range(last - 1, -1, -1):
        move = moves[index]
        if move.node != 1:
            continue
        if isinstance(move, (RemovePebble, DecreaseBlack)):
            return moves[:index] + moves[index + 1 : last + 1] + [move] + moves[last + 1 :]
        return moves
    return moves


def _leftmost_leaf(shape: TreeShape, node: int) -> int:
    while shape.is_internal(node):
        node = shape.children(node)[0]
    return node


@dataclass
class QueryStep:
    """Camada gerada por um movimento de consulta."""

    index: int
    move: PebbleMove
    memory: tuple[int, ...]
    pebbles: int
    internal: bool = False
    trailing: list[PebbleMove] = field(default_factory=list)
    guesses: tuple[int, ...] = ()
    guess_only: bool = False

    @property
    def kind(self) -> str:
        if self.guess_only:
            return "guess"
        base = "func" if self.internal else "leaf"
        return f"verify-{base}" if isinstance(self.move, DecreaseWhite) else base


class LayerCompiler:
    """Motor comum: uma camada por consulta, memoria = valores dos nos com pebble."""

    def __init__(self, seq: PebbleSequence, k: int, game: Game) -> None:
        if k < 2:
            raise CompilationError(f"k deve ser >= 2: {k}")
        if seq.game is not game:
            raise CompilationError(
                f"Sequencia do jogo {seq.game.value}; esperado {game.value}"
            )
        verdict = validate_sequence(seq)
        if not verdict.valid:
            logger.error("Sequencia invalida para compilacao: %s", verdict.reason)
            raise CompilationError(
                f"Sequencia invalida no indice {verdict.first_illegal_index}: {verdict.reason}"
            )
        self.seq = seq
        self.k = k
        self.game = game
        self.shape = TreeShape(seq.h)
        moves = delay_white_placements([m for m in seq.moves if m is not None], self.shape)
        self.moves = delay_root_removal(resolve_leading_guesses(moves, self.shape))
        self._check_normalized()
        self.steps = self._plan()

    def _check_normalized(self) -> None:
        config = self.seq.configurations[0]
        try:
            for move in self.moves:
                config = apply_move(config, move)
        except IllegalMoveError as exc:
            raise CompilationError(f"Normalizacao gerou movimento ilegal: {exc}") from exc

    @staticmethod
    def _pebbles(config: PebbleConfiguration, memory: set[int]) -> int:
        pebbles = int(config.cost)
        if pebbles != len(memory):
            raise CompilationError(
                f"Memoria com {len(memory)} valores para {pebbles} pebbles em {config}"
            )
        return pebbles

    def _plan(self) -> list[QueryStep]:
        query_indices = [i for i, m in enumerate(self.moves) if is_query_move(m)]
        if not query_indices:
            raise CompilationError("Sequencia sem movimentos de consulta")
        last_query = query_indices[-1]

        memory: set[int] = set()
        leading: list[int] = []
        leading_start = 0
        steps: list[QueryStep] = []
        config = self.seq.configurations[0]
        for index, move in enumerate(self.moves):
            if is_query_move(move):
                if not steps and leading:
                    steps.append(
                        QueryStep(
                            leading_start,
                            PlaceBlackLeaf(_leftmost_leaf(self.shape, leading[0])),
                            (),
                            0,
                            guesses=tuple(leading),
                            guess_only=True,
                        )
                    )
                    memory.update(leading)
                step = QueryStep(
                    index,
                    move,
                    tuple(sorted(memory)),
                    self._pebbles(config, memory),
                    internal=self.shape.is_internal(move.node),
                )
                steps.append(step)
                self._apply_query_memory(memory, move)
            elif isinstance(move, IncreaseWhite):
                if steps:
                    steps[-1].trailing.append(move)
                    memory.add(move.node)
                else:
                    if not leading:
                        leading_start = index
                    leading.append(move.node)
            else:
                if steps:
                    steps[-1].trailing.append(move)
                memory.discard(move.node)
            config = apply_move(config, move)
            if index == last_query and 1 not in memory:
                raise CompilationError("Raiz sem preta apos a ultima consulta")
        return steps

    @staticmethod
    def _apply_query_memory(memory: set[int], move: PebbleMove) -> None:
        if isinstance(move, DecreaseWhite):
            memory.discard(move.node)
            return
        memory.add(move.node)
        memory.difference_update(_cleared_children(move))

    def _query_of(self, move: PebbleMove, values: Memory) -> QueryId:
        node = move.node
        if self.shape.is_leaf(node):
            return Leaf(node)
        left, right = self.shape.children(node)
        return Func(node, values[left], values[right])

    def _after_query(self, step: QueryStep, values: Memory, answer: int) -> Memory | None:
        result = dict(values)
        if step.guess_only:
            return result
        move = step.move
        if isinstance(move, DecreaseWhite):
            if answer != result[move.node]:
                return None
            del result[move.node]
            return result
        result[move.node] = answer
        for child in _cleared_children(move):
            result.pop(child, None)
        return result

    def _expand(self, step: QueryStep, values: Memory) -> list[Memory]:
        base = dict(values)
        guesses = list(step.guesses)
        for move in step.trailing:
            if isinstance(move, IncreaseWhite):
                guesses.append(move.node)
            else:
                base.pop(move.node, None)
        targets: list[Memory] = []
        for combo in itertools.product(range(1, self.k + 1), repeat=len(guesses)):
            target = dict(base)
            target.update(zip(guesses, combo))
            targets.append(target)
        return targets

    def compile(self) -> BranchingProgram:
        k = self.k
        bp = BranchingProgram(
            k, self.shape, start=0, claimed_deterministic=self.game is Game.BLACK
        )
        layer_ids: list[dict[tuple[int, ...], int]] = []
        layer_values: list[list[Memory]] = []
        next_id = 0
        for number, step in enumerate(self.steps):
            ids: dict[tuple[int, ...], int] = {}
            values_list: list[Memory] = []
            for combo in itertools.product(range(1, k + 1), repeat=len(step.memory)):
                values = dict(zip(step.memory, combo))
                bp.add_state(next_id, self._query_of(step.move, values))
                ids[combo] = next_id
                values_list.append(values)
                next_id += 1
            layer_ids.append(ids)
            layer_values.append(values_list)
            bp.layers.append(
                LayerInfo(
                    step=step.index,
                    pebbles=step.pebbles,
                    width=len(ids),
                    query_kind=step.kind,
                    states=tuple(ids.values()),
                )
            )
            logger.debug("Camada %d: %d estados (%s)", number, len(ids), step.kind)

        outputs: dict[int, int] = {}
        for value in range(1, k + 1):
            bp.add_state(next_id, Output(value))
            outputs[value] = next_id
            next_id += 1

        for number, step in enumerate(self.steps):
            is_last = number == len(self.steps) - 1
            for values, source in zip(layer_values[number], layer_ids[number].values()):
                for answer in range(1, k + 1):
                    after = self._after_query(step, values, answer)
                    if after is None:
                        continue
                    if is_last:
                        root = after.get(1)
                        if root is None:
                            raise CompilationError("Raiz sem valor na ultima camada")
                        bp.add_edge(source, answer, outputs[root])
                        continue
                    following = self.steps[number + 1]
                    for target in self._expand(step, after):
                        if set(target) != set(following.memory):
                            raise CompilationError(
                                f"Memoria inconsistente entre camadas {number} e {number + 1}"
                            )
                        key = tuple(target[node] for node in following.memory)
                        bp.add_edge(source, answer, layer_ids[number + 1][key])

        logger.info(
            "Programa compilado (%s, k=%d): %d estados em %d camadas",
            self.game.value,
            k,
            bp.state_count(),
            len(bp.layers),
        )
        return bp


def compile_black(seq: PebbleSequence, k: int) -> BranchingProgram:
    """Programa deterministico: folha -> Leaf(i), deslize -> Func(i, filhos lembrados)."""
    return LayerCompiler(seq, k, Game.BLACK).compile()


def compile_bw(seq: PebbleSequence, k: int) -> BranchingProgram:
    """Programa nao deterministico: branca = palpite k-ario, remocao de branca = verificacao."""
    return LayerCompiler(seq, k, Game.WHOLE).compile()
