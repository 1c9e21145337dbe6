"""Programas de ramificacao k-arios sobre consultas de TEP."""

from __future__ import annotations

import logging
from collections.abc import Iterable
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any, Union

from tep_lab.core.tree import Func, Leaf, QueryId, TreeShape

if TYPE_CHECKING:
    import networkx as nx

logger = logging.getLogger(__name__)


def _import_networkx() -> Any:
    """Importa networkx sob demanda."""
    try:
        import networkx as nx

        return nx
    except ImportError as exc:
        raise ImportError(
            "networkx e necessario para programas de ramificacao. "
            "Instale com: pip install networkx"
        ) from exc


@dataclass(frozen=True, order=True)
class Output:
    """Estado sorvedouro que devolve um valor em [k]."""

    value: int

    def __str__(self) -> str:
        return f"out={self.value}"


StateLabel = Union[Leaf, Func, Output]


@dataclass(frozen=True)
class LayerInfo:
    """Camada gerada por um movimento de consulta na compilacao."""

    step: int
    pebbles: int
    width: int
    query_kind: str  # "leaf", "func", "verify-leaf", "verify-func", "guess"
    states: tuple[int, ...] = ()


class BranchingProgram:
    """Multigrafo aciclico rotulado: estados de consulta, arestas em [k], k saidas."""

    def __init__(
        self,
        k: int,
        shape: TreeShape,
        start: int = 0,
        claimed_deterministic: bool | None = None,
    ) -> None:
        nx = _import_networkx()
        self.k = k
        self.shape = shape
        self.start = start
        self.claimed_deterministic = claimed_deterministic
        self.graph: nx.MultiDiGraph = nx.MultiDiGraph()
        self.layers: list[LayerInfo] = []
        self._labels: dict[int, StateLabel] = {}
        self._adjacency: dict[int, dict[int, tuple[int, ...]]] | None = None
        self._topological: list[int] | None = None

    @classmethod
    def build(
        cls,
        k: int,
        h: int,
        states: dict[int, StateLabel],
        edges: Iterable[tuple[int, int, int]],
        start: int = 0,
        claimed_deterministic: bool | None = None,
    ) -> BranchingProgram:
        """Constroi programa a partir de rotulos e triplas (origem, rotulo, destino)."""
        program = cls(k, TreeShape(h), start=start, claimed_deterministic=claimed_deterministic)
        for state_id, label in states.items():
            program.add_state(state_id, label)
        for source, label, target in edges:
            program.add_edge(source, label, target)
        return program

    def _invalidate(self) -> None:
        self._adjacency = None
        self._topological = None

    def add_state(self, state_id: int, label: StateLabel) -> None:
        """Adiciona estado com sua consulta ou saida."""
        self.graph.add_node(state_id, label=label)
        self._labels[state_id] = label
        self._invalidate()
        logger.debug("Estado adicionado: %d (%s)", state_id, label)

    def add_edge(self, source: int, label: int, target: int) -> None:
        """Adiciona aresta rotulada; rotulos repetidos modelam palpites."""
        for state in (source, target):
            if state not in self._labels:
                raise KeyError(f"Estado inexistente: {state}")
        self.graph.add_edge(source, target, label=label)
        self._invalidate()

    def remove_edge(self, source: int, label: int, target: int) -> None:
        for key, data in list(self.graph.get_edge_data(source, target, default={}).items()):
            if data["label"] == label:
                self.graph.remove_edge(source, target, key=key)
                self._invalidate()
                return
        raise KeyError(f"Aresta inexistente: {source} -{label}-> {target}")

    def copy(self) -> BranchingProgram:
        clone = BranchingProgram(
            self.k, self.shape, start=self.start, claimed_deterministic=self.claimed_deterministic
        )
        for state_id in self.states:
            clone.add_state(state_id, self._labels[state_id])
        for source, label, target in self.edges():
            clone.add_edge(source, label, target)
        clone.layers = list(self.layers)
        return clone

    @property
    def states(self) -> list[int]:
        return sorted(self._labels)

    def state_count(self) -> int:
        return len(self._labels)

    def edge_count(self) -> int:
        return int(self.graph.number_of_edges())

    def label(self, state: int) -> StateLabel:
        return self._labels[state]

    def query(self, state: int) -> QueryId | None:
        label = self._labels[state]
        return None if isinstance(label, Output) else label

    def is_output(self, state: int) -> bool:
        return isinstance(self._labels[state], Output)

    def output_value(self, state: int) -> int | None:
        label = self._labels[state]
        return label.value if isinstance(label, Output) else None

    def output_states(self) -> dict[int, list[int]]:
        """Valor de saida -> estados com esse rotulo."""
        result: dict[int, list[int]] = {}
        for state_id, label in sorted(self._labels.items()):
            if isinstance(label, Output):
                result.setdefault(label.value, []).append(state_id)
        return result

    def edges(self) -> list[tuple[int, int, int]]:
        """Arestas como (origem, rotulo, destino), ordenadas."""
        return sorted(
            (source, data["label"], target)
            for source, target, data in self.graph.edges(data=True)
        )

    def _build_adjacency(self) -> dict[int, dict[int, tuple[int, ...]]]:
        adjacency: dict[int, dict[int, list[int]]] = {s: {} for s in self._labels}
        for source, label, target in self.edges():
            adjacency[source].setdefault(label, []).append(target)
        return {
            s: {label: tuple(sorted(ts)) for label, ts in by_label.items()}
            for s, by_label in adjacency.items()
        }

    def successors(self, state: int, label: int) -> tuple[int, ...]:
        """Destinos das arestas com o rotulo dado (vazio = rejeicao)."""
        if self._adjacency is None:
            self._adjacency = self._build_adjacency()
        return self._adjacency[state].get(label, ())

    def out_edges(self, state: int) -> list[tuple[int, int]]:
        """Pares (rotulo, destino) ordenados."""
        if self._adjacency is None:
            self._adjacency = self._build_adjacency()
        return sorted(
            (label, target)
            for label, targets in self._adjacency[state].items()
            for target in targets
        )

    @property
    def is_deterministic(self) -> bool:
        """Todo estado de consulta tem exatamente k arestas com rotulos distintos."""
        for state_id, label in self._labels.items():
            if isinstance(label, Output):
                continue
            labels = [lab for lab, _ in self.out_edges(state_id)]
            if len(labels) != self.k or set(labels) != set(range(1, self.k + 1)):
                return False
        return True

    def is_acyclic(self) -> bool:
        nx = _import_networkx()
        return bool(nx.is_directed_acyclic_graph(self.graph))

    def topological_order(self) -> list[int]:
        nx = _import_networkx()
        if self._topological is None:
            self._topological = list(nx.lexicographical_topological_sort(self.graph))
        return list(self._topological)

    def descendants(self, state: int) -> set[int]:
        nx = _import_networkx()
        return set(nx.descendants(self.graph, state))

    def ancestors(self, state: int) -> set[int]:
        nx = _import_networkx()
        return set(nx.ancestors(self.graph, state))

    def useful_states(self) -> set[int]:
        """Estados alcancaveis do inicio e que alcancam alguma saida."""
        reachable = self.descendants(self.start) | {self.start}
        co_reachable: set[int] = set()
        for states in self.output_states().values():
            for state in states:
                co_reachable |= self.ancestors(state) | {state}
        return reachable & co_reachable

    def query_states(self) -> dict[QueryId, list[int]]:
        """Consulta -> estados que a fazem."""
        result: dict[QueryId, list[int]] = {}
        for state_id in self.states:
            query = self.query(state_id)
            if query is not None:
                result.setdefault(query, []).append(state_id)
        return result

    def get_summary(self) -> dict[str, Any]:
        return {
            "k": self.k,
            "h": self.shape.h,
            "states": self.state_count(),
            "edges": self.edge_count(),
            "outputs": len(self.output_states()),
            "deterministic": self.is_deterministic,
            "layers": [layer.width for layer in self.layers],
        }
