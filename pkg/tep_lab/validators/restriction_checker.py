"""Verificadores das restricoes semanticas: corretude, thrifty, read-once, null-paths, troca."""

from __future__ import annotations

import logging
from collections import Counter

from tep_lab.config import LabSettings, load_settings
from tep_lab.core.execution import consistent_reach, enumerate_complete_paths
from tep_lab.core.program import BranchingProgram
from tep_lab.core.tree import QueryId, TepInstance, iter_check_instances
from tep_lab.errors import BudgetExceededError
from tep_lab.validators.verdict import RestrictionVerdict

logger = logging.getLogger(__name__)


def _log_verdict(verdict: RestrictionVerdict) -> RestrictionVerdict:
    logger.info(
        "Verificacao %s: %s (%s, %d instancias)",
        verdict.property,
        "passou" if verdict.passed else "falhou",
        verdict.mode,
        verdict.instances_checked,
    )
    return verdict


def _reached_outputs(bp: BranchingProgram, instance: TepInstance) -> set[int]:
    _, through = consistent_reach(bp, instance)
    return {v for s in through if (v := bp.output_value(s)) is not None}


def check_determinism(bp: BranchingProgram) -> RestrictionVerdict:
    """Cada estado de consulta tem exatamente uma aresta por rotulo em [k]."""
    expected = list(range(1, bp.k + 1))
    for state in bp.states:
        if bp.is_output(state):
            continue
        labels = sorted(lab for lab, _ in bp.out_edges(state))
        if labels != expected:
            return _log_verdict(
                RestrictionVerdict(
                    "determinism",
                    False,
                    {"state": state, "labels": labels},
                    mode="structural",
                    message=f"estado {state} com rotulos {labels}",
                )
            )
    return _log_verdict(RestrictionVerdict("determinism", True, mode="structural"))


def computes_tep(
    bp: BranchingProgram, settings: LabSettings | None = None
) -> RestrictionVerdict:
    """Toda instancia tem caminho completo e todos terminam na saida v_1."""
    mode, instances = iter_check_instances(bp.shape, bp.k, settings)
    checked = 0
    for instance in instances:
        checked += 1
        outputs = _reached_outputs(bp, instance)
        expected = instance.node_value(1)
        if outputs != {expected}:
            reason = "rejeita a instancia" if not outputs else f"saidas {sorted(outputs)}"
            return _log_verdict(
                RestrictionVerdict(
                    "computes_tep",
                    False,
                    {"instance": instance, "outputs": sorted(outputs), "expected": expected},
                    mode,
                    checked,
                    f"{reason}; esperado {expected}",
                )
            )
    return _log_verdict(RestrictionVerdict("computes_tep", True, None, mode, checked))


def _first_non_thrifty(
    bp: BranchingProgram, instance: TepInstance
) -> tuple[int, QueryId] | None:
    _, through = consistent_reach(bp, instance)
    for state in sorted(through):
        query = bp.query(state)
        if query is not None and not instance.is_thrifty(query):
            return state, query
    return None


def check_thrifty(
    bp: BranchingProgram, settings: LabSettings | None = None
) -> RestrictionVerdict:
    """Caminhos completos so consultam f_i(v_2i, v_2i+1)."""
    mode, instances = iter_check_instances(bp.shape, bp.k, settings)
    checked = 0
    for instance in instances:
        checked += 1
        found = _first_non_thrifty(bp, instance)
        if found is not None:
            state, query = found
            return _log_verdict(
                RestrictionVerdict(
                    "thrifty",
                    False,
                    {"instance": instance, "state": state, "query": query},
                    mode,
                    checked,
                    f"estado {state} consulta {query} fora do valor correto",
                )
            )
    return _log_verdict(RestrictionVerdict("thrifty", True, None, mode, checked))


def check_syntactic_read_once(bp: BranchingProgram) -> RestrictionVerdict:
    """Nenhum caminho fonte-sorvedouro passa por dois estados com a mesma consulta."""
    useful = bp.useful_states()
    for query, states in sorted(bp.query_states().items(), key=lambda item: item[1]):
        candidates = [s for s in states if s in useful]
        for first in candidates:
            below = bp.descendants(first)
            for second in candidates:
                if second != first and second in below:
                    return _log_verdict(
                        RestrictionVerdict(
                            "syntactic_read_once",
                            False,
                            {"states": [first, second], "query": query},
                            mode="structural",
                            message=f"{query} consultada em {first} e {second}",
                        )
                    )
    return _log_verdict(RestrictionVerdict("syntactic_read_once", True, mode="structural"))


def _walk_to_output(
    bp: BranchingProgram, state: int, useful: set[int]
) -> tuple[list[int], list[int]]:
    states: list[int] = []
    labels: list[int] = []
    while not bp.is_output(state):
        label, state = next((lab, t) for lab, t in bp.out_edges(state) if t in useful)
        labels.append(label)
        states.append(state)
    return states, labels


def check_null_path_free(
    bp: BranchingProgram, settings: LabSettings | None = None
) -> RestrictionVerdict:
    """Nenhum caminho completo do grafo atribui dois rotulos a mesma consulta.

    DFS a partir do inicio com atribuicao parcial; memo por (estado, atribuicao).
    """
    settings = settings or load_settings()
    useful = bp.useful_states()
    if bp.start not in useful:
        return _log_verdict(RestrictionVerdict("null_path_free", True, mode="structural"))

    Assignment = frozenset[tuple[QueryId, int]]
    empty: Assignment = frozenset()
    stack: list[tuple[int, Assignment, list[int], list[int]]] = [(bp.start, empty, [bp.start], [])]
    seen: set[tuple[int, Assignment]] = set()
    while stack:
        state, assignment, path, labels = stack.pop()
        if (state, assignment) in seen:
            continue
        seen.add((state, assignment))
        if len(seen) > settings.path_cap:
            raise BudgetExceededError(
                f"DFS de null-paths excedeu {settings.path_cap} visitas", limit=settings.path_cap
            )
        query = bp.query(state)
        if query is None:
            continue
        current = dict(assignment).get(query)
        for label, target in reversed(bp.out_edges(state)):
            if target not in useful:
                continue
            if current is not None and current != label:
                tail_states, tail_labels = _walk_to_output(bp, target, useful)
                witness = {
                    "path": path + [target] + tail_states,
                    "labels": labels + [label] + tail_labels,
                    "query": query,
                    "conflict": [current, label],
                }
                return _log_verdict(
                    RestrictionVerdict(
                        "null_path_free",
                        False,
                        witness,
                        mode="structural",
                        message=f"{query} respondida com {current} e {label}",
                    )
                )
            extended = assignment if current is not None else assignment | {(query, label)}
            stack.append((target, extended, path + [target], labels + [label]))
    return _log_verdict(RestrictionVerdict("null_path_free", True, mode="structural"))


def _first_conflict(
    bp: BranchingProgram, states: list[int], labels: list[int]
) -> tuple[QueryId, list[int]] | None:
    answers: dict[QueryId, int] = {}
    for state, label in zip(states, labels):
        query = bp.query(state)
        if query is None:
            continue
        previous = answers.setdefault(query, label)
        if previous != label:
            return query, [previous, label]
    return None


Segment = tuple[tuple[int, ...], tuple[int, ...]]


def check_composability(
    bp: BranchingProgram, settings: LabSettings | None = None
) -> RestrictionVerdict:
    """Dois caminhos completos pelo mesmo estado podem ser trocados nele.

    O prefixo de C(x) ate gamma seguido do sufixo de C(y) a partir de gamma precisa
    ser consistente com alguma instancia; como os slots sao independentes, basta
    que nenhuma consulta receba duas respostas.
    """
    settings = settings or load_settings()
    mode, instances = iter_check_instances(bp.shape, bp.k, settings)
    prefixes: dict[int, dict[Segment, TepInstance]] = {}
    suffixes: dict[int, dict[Segment, TepInstance]] = {}
    checked = 0
    for instance in instances:
        checked += 1
        for path in enumerate_complete_paths(bp, instance, settings):
            for index, state in enumerate(path.states):
                head = (path.states[:index], path.labels[:index])
                tail = (path.states[index:], path.labels[index:])
                prefixes.setdefault(state, {}).setdefault(head, instance)
                suffixes.setdefault(state, {}).setdefault(tail, instance)

    pairs = 0
    for state in sorted(prefixes):
        for (head, head_labels), first in prefixes[state].items():
            for (tail, tail_labels), second in suffixes[state].items():
                pairs += 1
                if pairs > settings.path_cap:
                    raise BudgetExceededError(
                        f"Mais de {settings.path_cap} pares prefixo/sufixo",
                        limit=settings.path_cap,
                    )
                states = list(head + tail)
                labels = list(head_labels + tail_labels)
                conflict = _first_conflict(bp, states, labels)
                if conflict is None:
                    continue
                query, answers = conflict
                witness = {
                    "instances": [first, second],
                    "state": state,
                    "split": len(head),
                    "path": states,
                    "labels": labels,
                    "query": query,
                    "conflict": answers,
                }
                return _log_verdict(
                    RestrictionVerdict(
                        "composability",
                        False,
                        witness,
                        mode,
                        checked,
                        f"troca no estado {state} responde {query} com {answers}",
                    )
                )
    return _log_verdict(RestrictionVerdict("composability", True, None, mode, checked))


def _repeated_query(queries: tuple[QueryId | None, ...]) -> QueryId | None:
    counts = Counter(q for q in queries if q is not None)
    repeated = [q for q, n in counts.items() if n > 1]
    return min(repeated, key=str) if repeated else None


def check_semantic_read_once(
    bp: BranchingProgram, settings: LabSettings | None = None
) -> RestrictionVerdict:
    """Todo caminho completo realizavel consulta cada slot no maximo uma vez."""
    settings = settings or load_settings()
    mode, instances = iter_check_instances(bp.shape, bp.k, settings)
    checked = 0
    for instance in instances:
        checked += 1
        for path in enumerate_complete_paths(bp, instance, settings):
            query = _repeated_query(path.queries)
            if query is None:
                continue
            states = [s for s, q in zip(path.states, path.queries) if q == query]
            return _log_verdict(
                RestrictionVerdict(
                    "semantic_read_once",
                    False,
                    {
                        "instance": instance,
                        "path": list(path.states),
                        "query": query,
                        "states": states,
                    },
                    mode,
                    checked,
                    f"{query} consultada duas vezes em caminho realizavel",
                )
            )
    return _log_verdict(RestrictionVerdict("semantic_read_once", True, None, mode, checked))


def _path_edges_exist(bp: BranchingProgram, states: list[int], labels: list[int]) -> bool:
    return all(
        t in bp.successors(s, lab) for s, lab, t in zip(states, labels, states[1:])
    ) and len(labels) == len(states) - 1


def reconfirm(
    bp: BranchingProgram, verdict: RestrictionVerdict, settings: LabSettings | None = None
) -> bool:
    """Reexecuta a testemunha de uma falha; True se a violacao e genuina."""
    if verdict.passed or verdict.witness is None:
        raise ValueError(f"Veredito de {verdict.property} nao tem testemunha de falha")
    w = verdict.witness
    prop = verdict.property

    if prop == "determinism":
        labels = sorted(lab for lab, _ in bp.out_edges(w["state"]))
        return not bp.is_output(w["state"]) and labels != list(range(1, bp.k + 1))

    if prop == "computes_tep":
        instance: TepInstance = w["instance"]
        return _reached_outputs(bp, instance) != {instance.node_value(1)}

    if prop == "thrifty":
        instance = w["instance"]
        _, through = consistent_reach(bp, instance)
        return (
            w["state"] in through
            and bp.query(w["state"]) == w["query"]
            and not instance.is_thrifty(w["query"])
        )

    if prop == "syntactic_read_once":
        first, second = w["states"]
        useful = bp.useful_states()
        return (
            bp.query(first) == bp.query(second) == w["query"]
            and first in useful
            and second in useful
            and second in bp.descendants(first)
        )

    if prop == "null_path_free":
        states, labels = w["path"], w["labels"]
        if states[0] != bp.start or not bp.is_output(states[-1]):
            return False
        if not _path_edges_exist(bp, states, labels):
            return False
        return _first_conflict(bp, states, labels) is not None

    if prop == "composability":
        states, labels, split = w["path"], w["labels"], w["split"]
        first, second = w["instances"]
        if states[0] != bp.start or not bp.is_output(states[-1]):
            return False
        if not _path_edges_exist(bp, states, labels) or states[split] != w["state"]:
            return False
        for position, (state, label) in enumerate(zip(states, labels)):
            source = first if position < split else second
            if source.answer(bp.query(state)) != label:  # type: ignore[arg-type]
                return False
        return _first_conflict(bp, states, labels) is not None

    if prop == "semantic_read_once":
        instance = w["instance"]
        states = w["path"]
        labels = [instance.answer(bp.query(s)) for s in states[:-1]]  # type: ignore[arg-type]
        if states[0] != bp.start or not bp.is_output(states[-1]):
            return False
        if not _path_edges_exist(bp, states, labels):
            return False
        return _repeated_query(tuple(bp.query(s) for s in states)) is not None

    if prop in ("node_independent", "bitwise_independent", "counting_bound"):
        from tep_lab.validators.independence_checker import reconfirm_independence

        return reconfirm_independence(bp, verdict, settings)

    raise ValueError(f"Propriedade desconhecida: {prop}")
