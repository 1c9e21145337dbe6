"""Cronogramas fracionarios derivados dos valores de pebble de estado.

Entre estados consecutivos gamma -> delta, com gamma consultando o no i, a
configuracao (b_gamma, w_gamma) e levada a (b_delta, w_delta) por movimentos
legais do jogo fracionario. Os valores sao LogValue exatos calculados a partir
de |R| e |A|; o jogo roda sem granularidade fixa.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from tep_lab.analyzers.reach_sets import StateValueProfile, reach_sets
from tep_lab.config import LabSettings
from tep_lab.core.execution import ComputationPath, canonical_path
from tep_lab.core.program import BranchingProgram
from tep_lab.core.tree import TreeShape, iter_check_instances
from tep_lab.errors import AnalysisError, IllegalMoveError
from tep_lab.pebbling.configuration import (
    Amount,
    DecreaseBlack,
    DecreaseWhite,
    Game,
    IncreaseBlack,
    IncreaseWhite,
    PebbleConfiguration,
    PebbleMove,
    RemovePebble,
)
from tep_lab.pebbling.sequence import PebbleSequence, validate_sequence

logger = logging.getLogger(__name__)

BITWISE_THRIFTY = "bitwise_thrifty"
NODE_INDEPENDENT_RO = "node_independent_ro"
VARIANTS = (BITWISE_THRIFTY, NODE_INDEPENDENT_RO)

VARIANT_PROPERTIES = {
    BITWISE_THRIFTY: ("bi_black", "bi_white"),
    NODE_INDEPENDENT_RO: (
        "bi_black",
        "niro_mix",
        "niro_white",
        "niro_glue",
        "niro_children",
        "niro_exclusive",
    ),
}


def _require_variant(variant: str) -> None:
    if variant not in VARIANTS:
        raise ValueError(f"Variante desconhecida: {variant}. Use {', '.join(VARIANTS)}")


def state_configuration(profile: StateValueProfile, state: int) -> PebbleConfiguration:
    """Configuracao fracionaria (b_gamma, w_gamma) do estado."""
    return PebbleConfiguration.from_values(Game.FRACTIONAL, profile.h, profile.values_at(state))


def _apply(seq: PebbleSequence, move: PebbleMove, context: dict[str, Any]) -> None:
    try:
        seq.apply(move)
    except IllegalMoveError as exc:
        raise AnalysisError(
            f"Transicao exige movimento ilegal ({exc.rule})",
            {**context, "move": str(move), "rule": exc.rule},
        ) from exc


def _transition(
    seq: PebbleSequence,
    shape: TreeShape,
    node: int,
    target: PebbleConfiguration,
    variant: str,
    context: dict[str, Any],
) -> None:
    children = shape.children(node) if shape.is_internal(node) else ()

    # pretas fora do no e dos filhos caem primeiro
    for other in shape.nodes:
        if other == node or other in children:
            continue
        drop = seq.last.b(other) - target.b(other)
        if drop > 0:
            _apply(seq, DecreaseBlack(other, drop), context)

    current = seq.last
    white_drop = current.w(node) - target.w(node)
    black_rise = target.b(node) - current.b(node)
    changes = white_drop > 0 or black_rise > 0

    # filhos completam a unidade com branca antes do no mudar
    if variant == NODE_INDEPENDENT_RO and changes:
        for child in children:
            room = 1 - seq.last.b(child) - seq.last.w(child)
            if room > 0:
                _apply(seq, IncreaseWhite(child, room), context)

    # branca do no
    if white_drop > 0:
        _apply(seq, DecreaseWhite(node, white_drop), context)

    # preta do no, pagando com as pretas dos filhos
    child_drops: list[tuple[int, Amount]] = []
    for child in children:
        drop = seq.last.b(child) - target.b(child)
        if drop > 0:
            child_drops.append((child, drop))
    if black_rise > 0:
        _apply(seq, IncreaseBlack(node, black_rise, tuple(child_drops)), context)
    else:
        for child, drop in child_drops:
            _apply(seq, DecreaseBlack(child, drop), context)

    # brancas sobem por ultimo
    for other in shape.nodes:
        rise = target.w(other) - seq.last.w(other)
        if rise > 0:
            _apply(seq, IncreaseWhite(other, rise), context)

    if seq.last != target:
        raise AnalysisError(
            "Transicao nao alcanca os valores do estado seguinte",
            {**context, "reached": str(seq.last), "expected": str(target)},
        )


def independent_schedule(
    bp: BranchingProgram,
    path: ComputationPath,
    variant: str = BITWISE_THRIFTY,
    profile: StateValueProfile | None = None,
    settings: LabSettings | None = None,
) -> PebbleSequence:
    """Pebbling fracionario cujas configuracoes nos marcadores sao as do perfil.

    Marcadores sao indices no caminho. Termina com a remocao da preta da raiz.
    """
    _require_variant(variant)
    profile = profile or reach_sets(bp, settings)
    shape = bp.shape
    for state in path.states:
        if not profile.on_complete_path(state):
            raise AnalysisError(
                f"Estado {state} sem instancias completas no perfil", {"state": state}
            )

    first = state_configuration(profile, path.states[0])
    if not first.is_empty():
        raise AnalysisError(
            "Estado inicial com valores nao nulos",
            {"state": path.states[0], "config": str(first)},
        )
    seq = PebbleSequence.start(Game.FRACTIONAL, shape.h)
    seq.mark(0)
    for index in range(len(path) - 1):
        query = path.queries[index]
        assert query is not None
        gamma, delta = path.states[index], path.states[index + 1]
        context = {"state": gamma, "next": delta, "node": query.node, "variant": variant}
        _transition(seq, shape, query.node, state_configuration(profile, delta), variant, context)
        seq.mark(index + 1)

    if seq.last.entries != ((1, 1, 0),):
        raise AnalysisError(
            "Estado de saida nao tem apenas a raiz preta",
            {"state": path.states[-1], "config": str(seq.last)},
        )
    _apply(seq, RemovePebble(1), {"state": path.states[-1], "variant": variant})

    verdict = validate_sequence(seq)
    if not verdict:
        raise AnalysisError(
            f"Cronograma invalido: {verdict.reason}",
            {"index": verdict.first_illegal_index, "variant": variant},
        )
    logger.debug("Cronograma %s com %d movimentos", variant, seq.move_count)
    return seq


def supercritical_threshold(h: int) -> Fraction:
    return Fraction(h, 2) + 1


def fallback_effective_value(p_gamma: Amount, p_left: Amount, p_right: Amount) -> Amount:
    """p_gamma - p_gamma(2i) - p_gamma(2i+1) + 2."""
    return p_gamma - p_left - p_right + 2


def independent_supercritical(
    path: ComputationPath, schedule: PebbleSequence, variant: str = BITWISE_THRIFTY
) -> tuple[int, Amount]:
    """(estado, valor efetivo certificado) do primeiro estado gargalo."""
    _require_variant(variant)
    shape = path.instance.shape
    threshold = supercritical_threshold(shape.h)
    configs: list[PebbleConfiguration] = []
    for index in range(len(path)):
        config = schedule.configuration_at_marker(index)
        if config is None:
            raise AnalysisError("Cronograma sem marcador para o estado", {"index": index})
        configs.append(config)

    for index, config in enumerate(configs):
        if config.cost >= threshold:
            return path.states[index], config.cost

    if variant == NODE_INDEPENDENT_RO:
        for index, config in enumerate(configs):
            query = path.queries[index]
            if query is None or not shape.is_internal(query.node):
                continue
            if not path.instance.is_thrifty(query):
                continue
            left, right = shape.children(query.node)
            effective = fallback_effective_value(
                config.cost,
                config.b(left) + config.w(left),
                config.b(right) + config.w(right),
            )
            if effective >= threshold:
                return path.states[index], effective

    raise AnalysisError(
        f"Nenhum estado atinge p >= {threshold}",
        {
            "variant": variant,
            "path": list(path.states),
            "max": str(max((c.cost for c in configs), key=float)),
        },
    )


@dataclass
class PropertyReport:
    """Contagens de uma proposicao condicional sobre pares consecutivos."""

    name: str
    checked: int = 0
    triggered: int = 0
    violations: int = 0
    witness: dict[str, Any] | None = None

    @property
    def vacuous(self) -> bool:
        return self.triggered == 0

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def record(self, triggered: bool, holds: bool, witness: dict[str, Any]) -> None:
        self.checked += 1
        if not triggered:
            return
        self.triggered += 1
        if not holds:
            self.violations += 1
            if self.witness is None:
                self.witness = witness

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "checked": self.checked,
            "triggered": self.triggered,
            "violations": self.violations,
            "vacuous": self.vacuous,
            "passed": self.passed,
            "witness": self.witness,
        }


def mixed_nodes(profile: StateValueProfile, state: int) -> list[int]:
    """Nos com preta e branca ao mesmo tempo no estado."""
    return [node for node, (b, w) in profile.values_at(state).items() if b > 0 and w > 0]


def _thrifty_indices(path: ComputationPath, node: int) -> list[int]:
    target = path.instance.thrifty_query(node)
    return [t for t, query in enumerate(path.queries) if query == target]


def _check_pair(
    reports: dict[str, PropertyReport],
    profile: StateValueProfile,
    path: ComputationPath,
    index: int,
    thrifty_at: dict[int, list[int]],
) -> None:
    shape = path.instance.shape
    gamma, delta = path.states[index], path.states[index + 1]
    mixed = mixed_nodes(profile, gamma) if "niro_exclusive" in reports else []
    for node in shape.nodes:
        thrifty_here = index in thrifty_at[node]
        b_g, b_d = profile.b(gamma, node), profile.b(delta, node)
        w_g, w_d = profile.w(gamma, node), profile.w(delta, node)
        r_g, a_d = profile.R(gamma, node), profile.A(delta, node)
        witness = {
            "state": gamma,
            "next": delta,
            "node": node,
            "b": [str(b_g), str(b_d)],
            "w": [str(w_g), str(w_d)],
            "values": list(path.instance.values),
        }

        if "bi_black" in reports:
            reports["bi_black"].record(not thrifty_here, b_g >= b_d, witness)
        for name in ("bi_white", "niro_white"):
            if name in reports:
                reports[name].record(not thrifty_here, w_g <= w_d, witness)
        if "niro_mix" in reports:
            earlier = any(t < index for t in thrifty_at[node])
            later = any(t >= index for t in thrifty_at[node])
            holds = (b_g == 0 or earlier) and (w_g == 0 or later)
            reports["niro_mix"].record(b_g > 0 or w_g > 0, holds, witness)
        if "niro_glue" in reports:
            holds = a_d <= r_g if b_g == 0 else r_g <= a_d
            reports["niro_glue"].record(not thrifty_here, holds, witness)
        if "niro_children" in reports:
            holds = thrifty_here
            if holds and shape.is_internal(node):
                for child in shape.children(node):
                    value = frozenset({path.instance.node_value(child)})
                    if profile.R(gamma, child) != value and profile.A(delta, child) != value:
                        holds = False
            reports["niro_children"].record(b_g < b_d or w_g > w_d, holds, witness)
        if "niro_exclusive" in reports:
            reports["niro_exclusive"].record(b_g > 0, node not in mixed, witness)


def value_property_report(
    bp: BranchingProgram,
    profile: StateValueProfile | None = None,
    variant: str = BITWISE_THRIFTY,
    settings: LabSettings | None = None,
) -> dict[str, PropertyReport]:
    """Verifica as proposicoes de monotonicidade ao longo dos caminhos canonicos."""
    _require_variant(variant)
    profile = profile or reach_sets(bp, settings)
    reports = {name: PropertyReport(name) for name in VARIANT_PROPERTIES[variant]}
    _, instances = iter_check_instances(bp.shape, bp.k, settings)
    for instance in instances:
        path = canonical_path(bp, instance)
        thrifty_at = {node: _thrifty_indices(path, node) for node in bp.shape.nodes}
        for index in range(len(path) - 1):
            _check_pair(reports, profile, path, index, thrifty_at)

    for report in reports.values():
        if report.vacuous:
            logger.info("Proposicao %s vacua (%d pares)", report.name, report.checked)
        elif report.violations:
            logger.info("Proposicao %s violada %d vezes", report.name, report.violations)
    return reports


def schedule_matches_profile(
    schedule: PebbleSequence, path: ComputationPath, profile: StateValueProfile
) -> list[int]:
    """Indices do caminho cuja configuracao marcada difere do perfil."""
    mismatched: list[int] = []
    for index, state in enumerate(path.states):
        config = schedule.configuration_at_marker(index)
        if config is None or config != state_configuration(profile, state):
            mismatched.append(index)
    return mismatched


def log_values_only_unit(schedule: PebbleSequence) -> bool:
    """Todos os valores do cronograma sao 0 ou 1."""
    for config in schedule.configurations:
        for _, b, w in config.entries:
            for value in (b, w):
                if value != 0 and value != 1:
                    return False
    return True
