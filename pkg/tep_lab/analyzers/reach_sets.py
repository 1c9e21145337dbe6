"""Conjuntos R_gamma(i), A_gamma(i) e valores de pebble de estado."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from tep_lab.config import LabSettings
from tep_lab.core.execution import consistent_reach
from tep_lab.core.log_value import LogValue
from tep_lab.core.program import BranchingProgram
from tep_lab.core.tree import TepInstance, input_length, iter_check_instances

logger = logging.getLogger(__name__)


def value_mask(value: int) -> int:
    """Bit (a - 1) representa o valor a em [k]."""
    return 1 << (value - 1)


def mask_values(mask: int) -> frozenset[int]:
    return frozenset(a + 1 for a in range(mask.bit_length()) if mask >> a & 1)


def bit_width(k: int) -> int:
    """log2(k) para k potencia de 2."""
    if k < 2 or k & (k - 1):
        raise ValueError(f"k deve ser potencia de 2: {k}")
    return k.bit_length() - 1


def bit_projection(mask: int, bit: int) -> frozenset[int]:
    """Valores do bit `bit` da codificacao binaria de (a - 1), a no conjunto."""
    return frozenset(((a - 1) >> bit) & 1 for a in mask_values(mask))


def bit_product(mask: int, k: int) -> int:
    """Menor produto de projecoes por bit que contem o conjunto."""
    projections = [bit_projection(mask, bit) for bit in range(bit_width(k))]
    result = 0
    for a in range(1, k + 1):
        if all((((a - 1) >> bit) & 1) in proj for bit, proj in enumerate(projections)):
            result |= value_mask(a)
    return result


@dataclass
class StateValueProfile:
    """R/A por estado e no como mascaras de bits, mais contagens de instancias.

    Os valores b, w, p sao derivados de |R| e |A|; nunca sao guardados como float.
    """

    k: int
    h: int
    m: int
    mode: str = "exhaustive"
    total: int = 0
    reach: dict[int, list[int]] = field(default_factory=dict)
    accept: dict[int, list[int]] = field(default_factory=dict)
    reach_count: dict[int, int] = field(default_factory=dict)
    through_count: dict[int, int] = field(default_factory=dict)

    @property
    def node_count(self) -> int:
        return 2**self.h - 1

    def R(self, state: int, node: int) -> frozenset[int]:
        return mask_values(self.reach[state][node - 1])

    def A(self, state: int, node: int) -> frozenset[int]:
        return mask_values(self.accept[state][node - 1])

    def r_size(self, state: int, node: int) -> int:
        return bin(self.reach[state][node - 1]).count("1")

    def a_size(self, state: int, node: int) -> int:
        return bin(self.accept[state][node - 1]).count("1")

    def on_complete_path(self, state: int) -> bool:
        return self.through_count.get(state, 0) > 0

    def _require(self, state: int) -> None:
        if not self.on_complete_path(state):
            raise ValueError(f"Estado {state} nao esta em caminho completo")

    def b(self, state: int, node: int) -> LogValue:
        """log_k(k / |R|)."""
        self._require(state)
        return LogValue(Fraction(self.k, self.r_size(state, node)), self.k)

    def w(self, state: int, node: int) -> LogValue:
        """log_k(|R| / |A|)."""
        self._require(state)
        return LogValue(Fraction(self.r_size(state, node), self.a_size(state, node)), self.k)

    def p(self, state: int, node: int) -> LogValue:
        """b + w = log_k(k / |A|)."""
        self._require(state)
        return LogValue(Fraction(self.k, self.a_size(state, node)), self.k)

    def p_total(self, state: int) -> LogValue:
        """Soma de p(i) sobre todos os nos."""
        self._require(state)
        return LogValue(Fraction(self.k**self.node_count, self.accept_product(state)), self.k)

    def accept_product(self, state: int) -> int:
        product = 1
        for node in range(1, self.node_count + 1):
            product *= self.a_size(state, node)
        return product

    def values_at(self, state: int) -> dict[int, tuple[LogValue, LogValue]]:
        """(b, w) por no, na escala log_k."""
        return {
            node: (self.b(state, node), self.w(state, node))
            for node in range(1, self.node_count + 1)
        }

    def get_summary(self, state: int) -> dict[str, Any]:
        return {
            "state": state,
            "reach_count": self.reach_count.get(state, 0),
            "through_count": self.through_count.get(state, 0),
            "R": {i: sorted(self.R(state, i)) for i in range(1, self.node_count + 1)},
            "A": {i: sorted(self.A(state, i)) for i in range(1, self.node_count + 1)},
            "p": str(self.p_total(state)) if self.on_complete_path(state) else None,
        }


def instance_masks(instance: TepInstance) -> list[int]:
    """Mascara do valor correto de cada no (indice no - 1)."""
    values = instance.node_values.values
    return [value_mask(values[node]) for node in instance.shape.nodes]


def reach_sets(bp: BranchingProgram, settings: LabSettings | None = None) -> StateValueProfile:
    """Projeta as instancias que alcancam / completam por cada estado nos valores corretos."""
    mode, instances = iter_check_instances(bp.shape, bp.k, settings)
    n = bp.shape.node_count
    profile = StateValueProfile(
        k=bp.k,
        h=bp.shape.h,
        m=input_length(bp.shape.h, bp.k),
        mode=mode,
        reach={s: [0] * n for s in bp.states},
        accept={s: [0] * n for s in bp.states},
        reach_count={s: 0 for s in bp.states},
        through_count={s: 0 for s in bp.states},
    )
    for instance in instances:
        profile.total += 1
        masks = instance_masks(instance)
        reached, through = consistent_reach(bp, instance)
        for state in reached:
            row = profile.reach[state]
            for index, mask in enumerate(masks):
                row[index] |= mask
            profile.reach_count[state] += 1
        for state in through:
            row = profile.accept[state]
            for index, mask in enumerate(masks):
                row[index] |= mask
            profile.through_count[state] += 1
    logger.info(
        "Conjuntos de alcance: %d estados, %d instancias (%s)",
        bp.state_count(),
        profile.total,
        mode,
    )
    return profile


def count_inputs_through(
    bp: BranchingProgram,
    state: int,
    settings: LabSettings | None = None,
    profile: StateValueProfile | None = None,
) -> int:
    """Instancias com caminho completo por `state`."""
    profile = profile or reach_sets(bp, settings)
    return profile.through_count.get(state, 0)
