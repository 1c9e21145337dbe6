"""Arvore binaria completa T^h_2 e instancias do Tree Evaluation Problem."""

from __future__ import annotations

import itertools
import logging
import random
from collections.abc import Iterator, Mapping, Sequence
from dataclasses import dataclass
from functools import cached_property
from typing import Union

from tep_lab.config import LabSettings, load_settings
from tep_lab.errors import BudgetExceededError, InvalidShapeError, MalformedQueryError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TreeShape:
    """Arvore T^h_2 com nos 1..2^h-1 em ordem de heap."""

    h: int

    def __post_init__(self) -> None:
        if not isinstance(self.h, int) or isinstance(self.h, bool) or self.h < 2:
            raise InvalidShapeError(f"Altura deve ser inteiro >= 2: {self.h!r}")

    @property
    def node_count(self) -> int:
        return 2**self.h - 1

    @property
    def first_leaf(self) -> int:
        return 2 ** (self.h - 1)

    @property
    def nodes(self) -> range:
        return range(1, self.node_count + 1)

    @property
    def leaves(self) -> range:
        return range(self.first_leaf, self.node_count + 1)

    @property
    def internal_nodes(self) -> range:
        return range(1, self.first_leaf)

    def contains(self, node: int) -> bool:
        return 1 <= node <= self.node_count

    def is_leaf(self, node: int) -> bool:
        return self.first_leaf <= node <= self.node_count

    def is_internal(self, node: int) -> bool:
        return 1 <= node < self.first_leaf

    def children(self, node: int) -> tuple[int, int]:
        if not self.is_internal(node):
            raise MalformedQueryError(f"No {node} nao e interno em T^{self.h}_2")
        return 2 * node, 2 * node + 1

    def parent(self, node: int) -> int | None:
        return node // 2 if node > 1 else None

    def sibling(self, node: int) -> int:
        return node ^ 1

    def is_left_child(self, node: int) -> bool:
        return node > 1 and node % 2 == 0

    def bottom_up(self) -> range:
        """Nos em ordem decrescente de id (filhos antes dos pais)."""
        return range(self.node_count, 0, -1)


@dataclass(frozen=True, order=True)
class Leaf:
    """Consulta ao valor de uma folha."""

    node: int

    def __str__(self) -> str:
        return f"v{self.node}"


@dataclass(frozen=True, order=True)
class Func:
    """Consulta f_i(x, y) a tabela de um no interno."""

    node: int
    x: int
    y: int

    def __str__(self) -> str:
        return f"f{self.node}({self.x},{self.y})"


QueryId = Union[Leaf, Func]


def validate_query(shape: TreeShape, k: int, query: QueryId) -> None:
    """Levanta MalformedQueryError se a consulta nao existe para (h, k)."""
    if isinstance(query, Leaf):
        if not shape.is_leaf(query.node):
            raise MalformedQueryError(f"Leaf({query.node}) nao e folha em T^{shape.h}_2")
        return
    if isinstance(query, Func):
        if not shape.is_internal(query.node):
            raise MalformedQueryError(f"Func({query.node}) nao e no interno em T^{shape.h}_2")
        if not (1 <= query.x <= k and 1 <= query.y <= k):
            raise MalformedQueryError(f"Argumentos fora de [{k}]: {query}")
        return
    raise MalformedQueryError(f"Consulta desconhecida: {query!r}")


def input_length(h: int, k: int) -> int:
    """Comprimento m da entrada: valores de nos mais entradas nao-thrifty."""
    m = 2**h - 1 + (k * k - 1) * (2 ** (h - 1) - 1)
    slots = 2 ** (h - 1) + (2 ** (h - 1) - 1) * k * k
    assert m == slots, (m, slots)
    return m


def instance_count(h: int, k: int) -> int:
    return k ** input_length(h, k)


def slot_of(shape: TreeShape, k: int, query: QueryId) -> int:
    """Posicao da consulta na ordem canonica (folhas, depois tabelas por no e (x, y))."""
    validate_query(shape, k, query)
    if isinstance(query, Leaf):
        return query.node - shape.first_leaf
    base = len(shape.leaves)
    return base + (query.node - 1) * k * k + (query.x - 1) * k + (query.y - 1)


def query_of_slot(shape: TreeShape, k: int, slot: int) -> QueryId:
    leaves = len(shape.leaves)
    if 0 <= slot < leaves:
        return Leaf(shape.first_leaf + slot)
    rest = slot - leaves
    node, entry = divmod(rest, k * k)
    if not 0 <= node < len(shape.internal_nodes):
        raise MalformedQueryError(f"Slot fora do intervalo: {slot}")
    x, y = divmod(entry, k)
    return Func(node + 1, x + 1, y + 1)


@dataclass(frozen=True)
class NodeValues:
    """Valores corretos v_i de todos os nos (indice 0 nao usado)."""

    values: tuple[int, ...]

    def __getitem__(self, node: int) -> int:
        if node < 1 or node >= len(self.values):
            raise KeyError(node)
        return self.values[node]

    @property
    def root(self) -> int:
        return self.values[1]

    def as_dict(self) -> dict[int, int]:
        return {i: v for i, v in enumerate(self.values) if i > 0}


@dataclass(frozen=True)
class TepInstance:
    """Entrada completa de TEP^h_2(k): valores por slot na ordem canonica."""

    shape: TreeShape
    k: int
    values: tuple[int, ...]

    def __post_init__(self) -> None:
        if not isinstance(self.k, int) or isinstance(self.k, bool) or self.k < 2:
            raise InvalidShapeError(f"k deve ser inteiro >= 2: {self.k!r}")
        expected = input_length(self.shape.h, self.k)
        if len(self.values) != expected:
            raise InvalidShapeError(
                f"Instancia com {len(self.values)} slots; esperado {expected}"
            )
        for value in self.values:
            if not 1 <= value <= self.k:
                raise InvalidShapeError(f"Valor fora de [{self.k}]: {value}")

    @classmethod
    def from_parts(
        cls,
        shape: TreeShape,
        k: int,
        leaves: Sequence[int] | Mapping[int, int],
        tables: Mapping[int, Sequence[Sequence[int]]],
    ) -> TepInstance:
        """Monta instancia a partir de folhas e tabelas k x k."""
        if isinstance(leaves, Mapping):
            leaf_list = [leaves[i] for i in shape.leaves]
        else:
            leaf_list = list(leaves)
        if len(leaf_list) != len(shape.leaves):
            raise InvalidShapeError(
                f"Esperadas {len(shape.leaves)} folhas, recebidas {len(leaf_list)}"
            )
        values = list(leaf_list)
        for node in shape.internal_nodes:
            if node not in tables:
                raise InvalidShapeError(f"Tabela ausente para o no {node}")
            table = tables[node]
            if len(table) != k or any(len(row) != k for row in table):
                raise InvalidShapeError(f"Tabela do no {node} nao e {k}x{k}")
            for row in table:
                values.extend(row)
        return cls(shape, k, tuple(values))

    @property
    def h(self) -> int:
        return self.shape.h

    @property
    def m(self) -> int:
        return len(self.values)

    def leaf_value(self, node: int) -> int:
        return self.values[node - self.shape.first_leaf]

    def entry(self, node: int, x: int, y: int) -> int:
        base = len(self.shape.leaves)
        return self.values[base + (node - 1) * self.k * self.k + (x - 1) * self.k + (y - 1)]

    def table(self, node: int) -> tuple[tuple[int, ...], ...]:
        return tuple(
            tuple(self.entry(node, x, y) for y in range(1, self.k + 1))
            for x in range(1, self.k + 1)
        )

    @property
    def leaf_values(self) -> dict[int, int]:
        return {i: self.leaf_value(i) for i in self.shape.leaves}

    @property
    def tables(self) -> dict[int, tuple[tuple[int, ...], ...]]:
        return {i: self.table(i) for i in self.shape.internal_nodes}

    def answer(self, query: QueryId) -> int:
        """Valor da entrada na posicao consultada."""
        if isinstance(query, Leaf):
            return self.leaf_value(query.node)
        return self.entry(query.node, query.x, query.y)

    @cached_property
    def node_values(self) -> NodeValues:
        return evaluate(self)

    def node_value(self, node: int) -> int:
        return self.node_values[node]

    def thrifty_query(self, node: int) -> QueryId:
        """Consulta thrifty do no: folha, ou f_i(v_2i, v_2i+1)."""
        if self.shape.is_leaf(node):
            return Leaf(node)
        left, right = self.shape.children(node)
        return Func(node, self.node_value(left), self.node_value(right))

    def is_thrifty(self, query: QueryId) -> bool:
        if isinstance(query, Leaf):
            return True
        return query == self.thrifty_query(query.node)


def evaluate(instance: TepInstance) -> NodeValues:
    """Calcula v_i para todos os nos, das folhas para a raiz."""
    shape = instance.shape
    values = [0] * (shape.node_count + 1)
    for node in shape.bottom_up():
        if shape.is_leaf(node):
            values[node] = instance.leaf_value(node)
        else:
            values[node] = instance.entry(node, values[2 * node], values[2 * node + 1])
    return NodeValues(tuple(values))


def thrifty_queries(instance: TepInstance) -> frozenset[QueryId]:
    return frozenset(instance.thrifty_query(i) for i in instance.shape.nodes)


def non_thrifty_slots(instance: TepInstance) -> list[int]:
    """Slots de tabela que nao sao f_i(v_2i, v_2i+1), em ordem canonica."""
    shape, k = instance.shape, instance.k
    thrifty = {slot_of(shape, k, instance.thrifty_query(i)) for i in shape.internal_nodes}
    first_table = len(shape.leaves)
    return [s for s in range(first_table, instance.m) if s not in thrifty]


def instance_from_index(shape: TreeShape, k: int, index: int) -> TepInstance:
    """Decodifica o indice na ordem de enumeracao (ultimo slot varia mais rapido)."""
    m = input_length(shape.h, k)
    if not 0 <= index < k**m:
        raise InvalidShapeError(f"Indice fora do intervalo: {index}")
    digits = [0] * m
    for position in range(m - 1, -1, -1):
        index, digit = divmod(index, k)
        digits[position] = digit + 1
    return TepInstance(shape, k, tuple(digits))


def instance_index(instance: TepInstance) -> int:
    index = 0
    for value in instance.values:
        index = index * instance.k + (value - 1)
    return index


def _check_budget(h: int, k: int, settings: LabSettings) -> int:
    total = instance_count(h, k)
    if total > settings.enumeration_cap:
        logger.error(
            "Enumeracao de %d instancias excede o limite %d", total, settings.enumeration_cap
        )
        raise BudgetExceededError(
            f"k^m = {total} excede o limite de enumeracao {settings.enumeration_cap}",
            limit=settings.enumeration_cap,
            required=total,
        )
    return total


def enumerate_instances(
    h: int, k: int, settings: LabSettings | None = None
) -> Iterator[TepInstance]:
    """Gera todas as k^m instancias em ordem lexicografica dos slots."""
    settings = settings or load_settings()
    shape = TreeShape(h)
    total = _check_budget(h, k, settings)
    logger.info("Enumerando %d instancias (h=%d, k=%d)", total, h, k)
    return _enumerate(shape, k)


def _enumerate(shape: TreeShape, k: int) -> Iterator[TepInstance]:
    m = input_length(shape.h, k)
    for values in itertools.product(range(1, k + 1), repeat=m):
        yield TepInstance(shape, k, values)


def sample_instance(h: int, k: int, seed: int) -> TepInstance:
    """Instancia uniforme e deterministica para a semente."""
    shape = TreeShape(h)
    rng = random.Random(seed)
    m = input_length(h, k)
    return TepInstance(shape, k, tuple(rng.randint(1, k) for _ in range(m)))


def perturb(instance: TepInstance, query: QueryId, value: int) -> TepInstance:
    """Copia da instancia com um unico slot alterado."""
    slot = slot_of(instance.shape, instance.k, query)
    if not 1 <= value <= instance.k:
        raise InvalidShapeError(f"Valor fora de [{instance.k}]: {value}")
    values = list(instance.values)
    values[slot] = value
    return TepInstance(instance.shape, instance.k, tuple(values))


def iter_check_instances(
    shape: TreeShape, k: int, settings: LabSettings | None = None
) -> tuple[str, Iterator[TepInstance]]:
    """Fonte de instancias para os verificadores: exaustiva ou amostrada."""
    settings = settings or load_settings()
    total = instance_count(shape.h, k)
    if total <= settings.enumeration_cap:
        return "exhaustive", _enumerate(shape, k)
    logger.info(
        "k^m = %d acima do limite; usando %d amostras (seed=%d)",
        total,
        settings.sample_size,
        settings.sample_seed,
    )
    return "sampled", _sampled(shape, k, settings)


def _sampled(shape: TreeShape, k: int, settings: LabSettings) -> Iterator[TepInstance]:
    rng = random.Random(settings.sample_seed)
    m = input_length(shape.h, k)
    for _ in range(settings.sample_size):
        yield TepInstance(shape, k, tuple(rng.randint(1, k) for _ in range(m)))
