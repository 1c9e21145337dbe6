"""Validacao estrutural de programas de ramificacao."""

from __future__ import annotations

import logging

from tep_lab.core.program import BranchingProgram, _import_networkx
from tep_lab.core.tree import validate_query
from tep_lab.errors import MalformedQueryError
from tep_lab.validators.verdict import Severity, StructureIssue, StructureReport

logger = logging.getLogger(__name__)


class StructureValidator:
    """Valida um programa contra a definicao: aciclico, fonte unica, k saidas."""

    def __init__(self, bp: BranchingProgram) -> None:
        self.bp = bp
        self._issues: list[StructureIssue] = []

    def validate_all(self) -> StructureReport:
        self._issues.clear()
        acyclic = self._validate_acyclic()
        self._validate_source()
        self._validate_outputs()
        self._validate_labels()
        deterministic = self.bp.is_deterministic
        self._validate_determinism(deterministic)
        report = StructureReport(list(self._issues), acyclic, deterministic)
        logger.info(
            "Validacao estrutural: %s (%d problemas)",
            "ok" if report.valid else "falhou",
            len(report.issues),
        )
        return report

    def _add(
        self,
        rule: str,
        message: str,
        severity: Severity = Severity.ERROR,
        states: list[int] | None = None,
        edges: list[tuple[int, int, int]] | None = None,
    ) -> None:
        self._issues.append(StructureIssue(rule, message, severity, states or [], edges or []))

    def _validate_acyclic(self) -> bool:
        if self.bp.is_acyclic():
            return True
        nx = _import_networkx()
        cycle = nx.find_cycle(self.bp.graph)
        edges = [(s, self.bp.graph.edges[s, t, key]["label"], t) for s, t, key in cycle]
        self._add(
            "acyclic",
            "Programa contem ciclo",
            states=sorted({s for s, _, _ in edges}),
            edges=edges,
        )
        return False

    def _validate_source(self) -> None:
        bp = self.bp
        if bp.start not in bp.states:
            self._add("single-source", f"Estado inicial {bp.start} inexistente")
            return
        sources = [s for s in bp.states if bp.graph.in_degree(s) == 0]
        extra = [s for s in sources if s != bp.start]
        if extra:
            self._add(
                "single-source",
                f"Fontes alem do inicio: {extra}",
                states=extra,
            )
        if bp.graph.in_degree(bp.start) != 0:
            self._add("single-source", "Estado inicial tem arestas de entrada", states=[bp.start])

    def _validate_outputs(self) -> None:
        bp = self.bp
        outputs = bp.output_states()
        values = sorted(outputs)
        if values != list(range(1, bp.k + 1)):
            self._add(
                "outputs",
                f"Saidas devem ter valores 1..{bp.k}; encontrados {values}",
                states=sorted(s for ss in outputs.values() for s in ss),
            )
        duplicated = [ss for ss in outputs.values() if len(ss) > 1]
        for states in duplicated:
            self._add("outputs", "Valor de saida repetido", states=states)
        for states in outputs.values():
            for state in states:
                edges = [(state, lab, t) for lab, t in bp.out_edges(state)]
                if edges:
                    self._add(
                        "output-sink",
                        f"Saida {state} tem arestas de saida",
                        states=[state],
                        edges=edges,
                    )

    def _validate_labels(self) -> None:
        bp = self.bp
        for source, label, target in bp.edges():
            if not 1 <= label <= bp.k:
                self._add(
                    "edge-label",
                    f"Rotulo {label} fora de [{bp.k}]",
                    edges=[(source, label, target)],
                )
        for state in bp.states:
            query = bp.query(state)
            if query is None:
                continue
            try:
                validate_query(bp.shape, bp.k, query)
            except MalformedQueryError as exc:
                self._add("query-label", str(exc), states=[state])

    def _validate_determinism(self, deterministic: bool) -> None:
        if deterministic:
            return
        bp = self.bp
        offending: list[int] = []
        for state in bp.states:
            if bp.is_output(state):
                continue
            labels = [lab for lab, _ in bp.out_edges(state)]
            if sorted(labels) != list(range(1, bp.k + 1)):
                offending.append(state)
        if not offending:
            return
        severity = Severity.ERROR if bp.claimed_deterministic else Severity.INFO
        self._add(
            "determinism",
            f"Estados sem exatamente uma aresta por rotulo: {offending}",
            severity=severity,
            states=offending,
        )


def validate_bp(bp: BranchingProgram) -> StructureReport:
    """Aciclicidade, fonte unica, k saidas distintas, rotulos e determinismo."""
    return StructureValidator(bp).validate_all()
