"""Pebbling branco-preto inteiro de caminhos em programas read-once thrifty.

Pretas marcam valores ja consultados e lembrados; brancas marcam palpites
ainda nao verificados. As regras sao aplicadas por estado, na ordem:
(1) branca nos filhos sem pebble do no consultado; (2a) se o no tem branca,
remove-a e remove as pretas dos filhos; (2b) caso contrario, preta no no com
remocao simultanea das pretas dos filhos, associada ao estado seguinte.
"""

from __future__ import annotations

import itertools
import logging
import math
from typing import Callable, Iterable

from tep_lab.analyzers.critical_states import Tag, supercritical_index
from tep_lab.analyzers.reach_sets import StateValueProfile, reach_sets
from tep_lab.config import LabSettings
from tep_lab.core.execution import ComputationPath, canonical_path, consistent_reach
from tep_lab.core.program import BranchingProgram
from tep_lab.core.tree import (
    Func,
    Leaf,
    QueryId,
    TepInstance,
    TreeShape,
    iter_check_instances,
    slot_of,
)
from tep_lab.errors import AnalysisError, IllegalMoveError, NoCompletePathError
from tep_lab.pebbling.configuration import (
    DecreaseWhite,
    Game,
    IncreaseBlack,
    IncreaseWhite,
    PebbleMove,
    RemovePebble,
)
from tep_lab.pebbling.sequence import PebbleSequence, validate_sequence
from tep_lab.validators.verdict import RestrictionVerdict

logger = logging.getLogger(__name__)

MODES = ("syntactic", "null_path_free")

PebblingFn = Callable[[ComputationPath], PebbleSequence]


def whole_pebble_count(h: int) -> int:
    """ceil(h/2) + 1."""
    return -(-h // 2) + 1


def first_queries(path: ComputationPath) -> dict[int, int]:
    """No -> indice da primeira consulta no caminho."""
    first: dict[int, int] = {}
    for index, query in enumerate(path.queries):
        if query is not None:
            first.setdefault(query.node, index)
    return first


def node_order(path: ComputationPath) -> list[int]:
    """Nos na ordem da primeira consulta."""
    first = first_queries(path)
    return sorted(first, key=first.__getitem__)


def _require_permutation(path: ComputationPath, shape: TreeShape, repeats_allowed: bool) -> None:
    nodes = [q.node for q in path.queries if q is not None]
    if not repeats_allowed and len(nodes) != len(set(nodes)):
        raise AnalysisError(
            "Caminho consulta um no mais de uma vez",
            {"path": list(path.states), "nodes": nodes},
        )
    missing = sorted(set(shape.nodes) - set(nodes))
    if missing:
        raise AnalysisError(
            f"Caminho nao consulta os nos {missing}", {"path": list(path.states)}
        )


def _apply(seq: PebbleSequence, move: PebbleMove, marker: int) -> None:
    try:
        seq.apply(move, marker=marker)
    except IllegalMoveError as exc:
        raise AnalysisError(
            f"Regra de pebbling gerou movimento ilegal: {exc.rule}",
            {"index": marker, "move": move.kind, "node": move.node},
        ) from exc


def apply_query_rules(
    seq: PebbleSequence,
    shape: TreeShape,
    node: int,
    index: int,
    following: int,
) -> None:
    """Regras (1), (2a) e (2b) para a consulta ao no `node` no indice `index`."""
    children = shape.children(node) if shape.is_internal(node) else ()
    for child in children:
        if seq.last.b(child) == 0 and seq.last.w(child) == 0:
            _apply(seq, IncreaseWhite(child), index)

    black_children = [c for c in children if seq.last.b(c) > 0]
    if seq.last.w(node) > 0:
        _apply(seq, DecreaseWhite(node), index)
        for child in black_children:
            _apply(seq, RemovePebble(child), index)
        return
    if seq.last.b(node) > 0:
        raise AnalysisError(
            f"No {node} ja tem preta ao ser consultado",
            {"index": index, "node": node},
        )
    decreases = tuple((c, 1) for c in black_children)
    _apply(seq, IncreaseBlack(node, 1, decreases), following)


def ro_thrifty_bw_pebbling(path: ComputationPath, mode: str = "syntactic") -> PebbleSequence:
    """Sequencia inteira associada ao caminho; marcadores sao indices no caminho.

    Em modo null_path_free so a primeira consulta de cada no gera movimentos.
    Termina com a remocao da preta da raiz.
    """
    if mode not in MODES:
        raise ValueError(f"Modo desconhecido: {mode}")
    shape = path.instance.shape
    _require_permutation(path, shape, repeats_allowed=mode == "null_path_free")
    first = first_queries(path)
    critical = sorted(first.values())
    output_index = len(path) - 1

    seq = PebbleSequence.start(Game.WHOLE, shape.h)
    seq.mark(critical[0])
    for position, index in enumerate(critical):
        following = critical[position + 1] if position + 1 < len(critical) else output_index
        query = path.queries[index]
        assert query is not None
        try:
            apply_query_rules(seq, shape, query.node, index, following)
        except AnalysisError as exc:
            exc.context["state"] = path.states[index]
            raise
    _apply(seq, RemovePebble(1), output_index)

    verdict = validate_sequence(seq)
    if not verdict.valid:
        raise AnalysisError(
            f"Pebbling do caminho invalido: {verdict.reason}",
            {"path": list(path.states), "index": verdict.first_illegal_index},
        )
    return seq


def check_rot_order(
    path: ComputationPath, seq: PebbleSequence, mode: str = "syntactic"
) -> list[str]:
    """Contrato das pebbles: lista vazia quando vale em toda configuracao.

    Preta em i: i consultado antes do estado e pai consultado (pela primeira
    vez, no modo null_path_free) a partir dele. Branca em i: primeira consulta
    de i a partir do estado e pai consultado ate o estado, inclusive.
    """
    shape = path.instance.shape
    first = first_queries(path)
    queried_at: dict[int, list[int]] = {}
    for index, query in enumerate(path.queries):
        if query is not None:
            queried_at.setdefault(query.node, []).append(index)

    problems: list[str] = []
    for position, config in enumerate(seq.configurations):
        if position not in seq.markers:
            continue
        t = int(seq.markers[position])
        for node in config.black_nodes:
            parent = shape.parent(node)
            if not any(j < t for j in queried_at.get(node, [])):
                problems.append(f"config {position}: preta em {node} sem consulta antes de {t}")
            if parent is None:
                continue
            if mode == "null_path_free":
                parent_later = first.get(parent, -1) >= t
            else:
                parent_later = any(j >= t for j in queried_at.get(parent, []))
            if not parent_later:
                problems.append(f"config {position}: pai de {node} nao consultado apos {t}")
        for node in config.white_nodes:
            parent = shape.parent(node)
            if parent is None:
                problems.append(f"config {position}: raiz com branca")
                continue
            if first.get(node, -1) < t:
                problems.append(f"config {position}: branca em {node} ja consultado antes de {t}")
            if first.get(parent, len(path)) > t:
                problems.append(f"config {position}: pai de {node} ainda nao consultado em {t}")
    return problems


def _associated_nodes(
    path: ComputationPath, seq: PebbleSequence
) -> Iterable[tuple[int, int]]:
    """(indice no caminho, no) para cada no com pebble em configuracao associada."""
    seen: set[tuple[int, int]] = set()
    for position, config in enumerate(seq.configurations):
        if position not in seq.markers:
            continue
        t = int(seq.markers[position])
        for node in config.pebbled_nodes:
            if (t, node) not in seen:
                seen.add((t, node))
                yield t, node


def _contradicting_instance(
    bp: BranchingProgram,
    state: int,
    node: int,
    value: int,
    settings: LabSettings | None,
) -> TepInstance | None:
    _, instances = iter_check_instances(bp.shape, bp.k, settings)
    for other in instances:
        if other.node_value(node) != value and state in consistent_reach(bp, other)[1]:
            return other
    return None


def check_pebble_soundness(
    bp: BranchingProgram,
    pebbling_fn: PebblingFn,
    settings: LabSettings | None = None,
    profile: StateValueProfile | None = None,
) -> RestrictionVerdict:
    """No com pebble em gamma tem o mesmo valor correto em toda instancia que completa por gamma.

    Equivale a A_gamma(i) = {v_i^I}; a testemunha traz (estado, no, I, J).
    """
    profile = profile or reach_sets(bp, settings)
    mode, instances = iter_check_instances(bp.shape, bp.k, settings)
    checked = 0
    for instance in instances:
        checked += 1
        path = canonical_path(bp, instance)
        seq = pebbling_fn(path)
        for t, node in _associated_nodes(path, seq):
            state = path.states[t]
            value = instance.node_value(node)
            if profile.A(state, node) == frozenset({value}):
                continue
            other = _contradicting_instance(bp, state, node, value, settings)
            logger.info("Pebble sem suporte no estado %d, no %d", state, node)
            return RestrictionVerdict(
                "pebble_soundness",
                False,
                {"state": state, "node": node, "instance": instance, "other": other},
                mode,
                checked,
                f"estado {state}: no {node} com pebble nao determina v_{node}",
            )
    logger.info("Solidez das pebbles: ok (%s, %d instancias)", mode, checked)
    return RestrictionVerdict("pebble_soundness", True, None, mode, checked)


def lehmer_code(permutation: list[int]) -> int:
    """Posicao da permutacao na ordem lexicografica."""
    remaining = sorted(permutation)
    code = 0
    for position, item in enumerate(permutation):
        index = remaining.index(item)
        code += index * math.factorial(len(permutation) - position - 1)
        remaining.pop(index)
    return code


def lehmer_decode(code: int, items: list[int]) -> list[int]:
    remaining = sorted(items)
    if not 0 <= code < math.factorial(len(remaining)):
        raise ValueError(f"Codigo fora do intervalo: {code}")
    result: list[int] = []
    for position in range(len(remaining) - 1, -1, -1):
        index, code = divmod(code, math.factorial(position))
        result.append(remaining.pop(index))
    return result


def _pebbled_at_supercritical(
    shape: TreeShape, order: list[int], count: int
) -> tuple[int, tuple[int, ...]]:
    """(posicao na permutacao, nos com pebble) no primeiro ponto com `count` pebbles.

    As regras so dependem da ordem de consulta, entao a permutacao basta.
    """
    seq = PebbleSequence.start(Game.WHOLE, shape.h)
    seq.mark(0)
    for position, node in enumerate(order):
        apply_query_rules(seq, shape, node, position, position + 1)
    t = supercritical_index(seq, count)
    config = next(
        c for i, c in enumerate(seq.configurations) if seq.markers.get(i) == t and c.cost >= count
    )
    return t, tuple(sorted(config.pebbled_nodes)[:count])


def _correct_slots(instance: TepInstance, nodes: Iterable[int]) -> set[int]:
    shape, k = instance.shape, instance.k
    return {slot_of(shape, k, instance.thrifty_query(node)) for node in nodes}


def semantic_ro_tag(path: ComputationPath) -> Tag:
    """(u, estado supercritico, x): x omite os slots corretos dos nos com pebble."""
    instance = path.instance
    shape = instance.shape
    _require_permutation(path, shape, repeats_allowed=False)
    order = node_order(path)
    t, pebbled = _pebbled_at_supercritical(shape, order, whole_pebble_count(shape.h))
    skipped = _correct_slots(instance, pebbled)
    x = tuple(v for slot, v in enumerate(instance.values) if slot not in skipped)
    return Tag(state=path.states[t], x=x, u=lehmer_code(order))


def _candidate_slots(shape: TreeShape, k: int, node: int) -> list[QueryId]:
    if shape.is_leaf(node):
        return [Leaf(node)]
    return [Func(node, a, b) for a in range(1, k + 1) for b in range(1, k + 1)]


def semantic_ro_untag(bp: BranchingProgram, tag: Tag) -> TepInstance:
    """Busca a unica instancia cujo tag coincide.

    Para cada escolha de valor e posicao dos slots corretos dos nos com pebble,
    preenche o resto com x e refaz o tag.
    """
    if tag.u is None:
        raise AnalysisError("Tag nao e da forma semantica", {"state": tag.state})
    shape, k = bp.shape, bp.k
    order = lehmer_decode(tag.u, list(shape.nodes))
    _, pebbled = _pebbled_at_supercritical(shape, order, whole_pebble_count(shape.h))
    m = len(tag.x) + len(pebbled)

    matches: set[TepInstance] = set()
    slot_choices = [_candidate_slots(shape, k, node) for node in pebbled]
    for queries in itertools.product(*slot_choices):
        slots = [slot_of(shape, k, q) for q in queries]
        if len(set(slots)) != len(slots):
            continue
        for values in itertools.product(range(1, k + 1), repeat=len(pebbled)):
            placed = dict(zip(slots, values))
            free = iter(tag.x)
            candidate = TepInstance(
                shape, k, tuple(placed[s] if s in placed else next(free) for s in range(m))
            )
            if _correct_slots(candidate, pebbled) != set(slots):
                continue
            try:
                path = canonical_path(bp, candidate)
            except NoCompletePathError:
                continue
            try:
                if semantic_ro_tag(path) == tag:
                    matches.add(candidate)
            except AnalysisError:
                continue
    if len(matches) != 1:
        raise AnalysisError(
            f"Tag decodifica para {len(matches)} instancias",
            {"state": tag.state, "u": tag.u},
        )
    return matches.pop()


def ro_supercritical(path: ComputationPath, mode: str = "syntactic") -> int:
    """Primeiro estado com ceil(h/2) + 1 pebbles associados."""
    seq = ro_thrifty_bw_pebbling(path, mode)
    index = supercritical_index(seq, whole_pebble_count(path.instance.h))
    return path.states[index]
