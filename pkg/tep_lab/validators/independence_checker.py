"""Independencia por no e por bit, e o limite de contagem por estado."""

from __future__ import annotations

import logging
from fractions import Fraction

from tep_lab.analyzers.reach_sets import (
    StateValueProfile,
    bit_product,
    bit_width,
    instance_masks,
    mask_values,
    reach_sets,
)
from tep_lab.config import LabSettings
from tep_lab.core.execution import consistent_reach
from tep_lab.core.program import BranchingProgram
from tep_lab.core.tree import TepInstance, iter_check_instances
from tep_lab.validators.verdict import RestrictionVerdict

logger = logging.getLogger(__name__)


def _in_rectangle(row: list[int], masks: list[int]) -> bool:
    return all(r & m for r, m in zip(row, masks))


def rectangle_violation(
    bp: BranchingProgram, profile: StateValueProfile, instance: TepInstance
) -> tuple[int, str] | None:
    """Primeiro estado onde alcancar/completar difere de pertencer ao retangulo."""
    masks = instance_masks(instance)
    reached, through = consistent_reach(bp, instance)
    for state in bp.states:
        if (state in reached) != _in_rectangle(profile.reach[state], masks):
            return state, "reach"
        if (state in through) != _in_rectangle(profile.accept[state], masks):
            return state, "through"
    return None


def _rectangle_verdict(
    bp: BranchingProgram,
    profile: StateValueProfile,
    settings: LabSettings | None,
    prop: str,
) -> RestrictionVerdict:
    mode, instances = iter_check_instances(bp.shape, bp.k, settings)
    checked = 0
    for instance in instances:
        checked += 1
        found = rectangle_violation(bp, profile, instance)
        if found is None:
            continue
        state, kind = found
        reached, through = consistent_reach(bp, instance)
        witness = {
            "state": state,
            "instance": instance,
            "kind": kind,
            "in_rectangle": _in_rectangle(
                (profile.reach if kind == "reach" else profile.accept)[state],
                instance_masks(instance),
            ),
            "member": state in (reached if kind == "reach" else through),
        }
        verdict = RestrictionVerdict(
            prop,
            False,
            witness,
            mode,
            checked,
            f"estado {state}: condicao de retangulo ({kind}) falha",
        )
        logger.info("Verificacao %s: falhou no estado %d", prop, state)
        return verdict
    logger.info("Verificacao %s: passou (%s, %d instancias)", prop, mode, checked)
    return RestrictionVerdict(prop, True, None, mode, checked)


def check_node_independent(
    bp: BranchingProgram,
    settings: LabSettings | None = None,
    profile: StateValueProfile | None = None,
) -> RestrictionVerdict:
    """Alcancar gamma sse v_i em R_gamma(i) para todo i (idem para A)."""
    profile = profile or reach_sets(bp, settings)
    return _rectangle_verdict(bp, profile, settings, "node_independent")


def bit_product_violation(profile: StateValueProfile) -> tuple[int, int, str] | None:
    """(estado, no, "R"|"A") cujo conjunto nao e produto das projecoes por bit."""
    for state in sorted(profile.reach):
        for kind, rows in (("R", profile.reach), ("A", profile.accept)):
            for index, mask in enumerate(rows[state]):
                if mask != bit_product(mask, profile.k):
                    return state, index + 1, kind
    return None


def check_bitwise_independent(
    bp: BranchingProgram,
    settings: LabSettings | None = None,
    profile: StateValueProfile | None = None,
) -> RestrictionVerdict:
    """Conjuntos sao produtos por bit e as condicoes de retangulo valem.

    Levanta ValueError se k nao e potencia de 2.
    """
    bit_width(bp.k)
    profile = profile or reach_sets(bp, settings)
    found = bit_product_violation(profile)
    if found is not None:
        state, node, kind = found
        rows = profile.reach if kind == "R" else profile.accept
        values = sorted(mask_values(rows[state][node - 1]))
        logger.info("Verificacao bitwise_independent: falhou no estado %d", state)
        return RestrictionVerdict(
            "bitwise_independent",
            False,
            {"state": state, "node": node, "kind": kind, "set": values},
            profile.mode,
            profile.total,
            f"{kind}_{state}({node}) = {values} nao e produto por bit",
        )
    return _rectangle_verdict(bp, profile, settings, "bitwise_independent")


def counting_bound(profile: StateValueProfile, state: int) -> Fraction:
    """k^(m - p_gamma) relativo ao total de instancias examinadas."""
    return Fraction(profile.total * profile.accept_product(state), profile.k**profile.node_count)


def check_counting_bound(
    bp: BranchingProgram,
    profile: StateValueProfile | None = None,
    settings: LabSettings | None = None,
) -> RestrictionVerdict:
    """count(gamma) <= k^(m - p_gamma) em todo estado de caminho completo.

    Forma inteira: count * k^(2^h - 1) <= total * prod_i |A_gamma(i)|.
    """
    profile = profile or reach_sets(bp, settings)
    for state in bp.states:
        count = profile.through_count.get(state, 0)
        if count == 0:
            continue
        if count * profile.k**profile.node_count > profile.total * profile.accept_product(state):
            bound = counting_bound(profile, state)
            logger.info("Limite de contagem violado no estado %d", state)
            return RestrictionVerdict(
                "counting_bound",
                False,
                {"state": state, "count": count, "bound": str(bound)},
                profile.mode,
                profile.total,
                f"estado {state}: {count} > {bound}",
            )
    logger.info("Limite de contagem: ok em %d estados", bp.state_count())
    return RestrictionVerdict("counting_bound", True, None, profile.mode, profile.total)


def reconfirm_independence(
    bp: BranchingProgram, verdict: RestrictionVerdict, settings: LabSettings | None = None
) -> bool:
    """Recalcula os conjuntos e confere a testemunha."""
    w = verdict.witness or {}
    profile = reach_sets(bp, settings)
    if verdict.property == "counting_bound":
        state = w["state"]
        count = profile.through_count.get(state, 0)
        return count * profile.k**profile.node_count > profile.total * profile.accept_product(
            state
        )
    if "instance" in w:
        reached, through = consistent_reach(bp, w["instance"])
        masks = instance_masks(w["instance"])
        state = w["state"]
        if w["kind"] == "reach":
            return (state in reached) != _in_rectangle(profile.reach[state], masks)
        return (state in through) != _in_rectangle(profile.accept[state], masks)
    rows = profile.reach if w["kind"] == "R" else profile.accept
    mask = rows[w["state"]][w["node"] - 1]
    return mask != bit_product(mask, profile.k)
