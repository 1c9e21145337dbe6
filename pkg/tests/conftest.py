"""Configuracoes compartilhadas de testes."""

from pathlib import Path

import pytest

from tep_lab.config import LabSettings
from tep_lab.core.program import BranchingProgram, Output
from tep_lab.core.tree import Func, Leaf, TepInstance
from tep_lab.parsers.json_loader import JsonLoader
from tep_lab.pebbling.sequence import PebbleSequence, optimal_black_sequence
from tep_lab.synthesis.compiler import compile_black, compile_bw

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture
def fix_a() -> TepInstance:
    """h=2, k=2: v2=1, v3=2, f1 = [[1,2],[2,1]], logo v1=2."""
    return JsonLoader().load_instance(DATA_DIR / "fix_a.json")


@pytest.fixture
def fix_b() -> TepInstance:
    """h=3, k=2: folhas 1,2,1,1 e todas as tabelas como f1 de fix_a."""
    return JsonLoader().load_instance(DATA_DIR / "fix_b.json")


@pytest.fixture
def small_settings() -> LabSettings:
    return LabSettings(enumeration_cap=2**17, path_cap=10_000, sample_size=500)


@pytest.fixture
def guess_verify_sequence() -> PebbleSequence:
    """[vazio, {w3}, {w3,b2}, {b1,w3}, {b1}, vazio]."""
    return JsonLoader().load_sequence(DATA_DIR / "guess_verify_h2.json")


@pytest.fixture
def fix_bp_det() -> BranchingProgram:
    """compile_black da estrategia preta otima h=2, k=2 (9 estados)."""
    pytest.importorskip("networkx", reason="networkx indisponivel")
    return compile_black(optimal_black_sequence(2), 2)


@pytest.fixture
def fix_bp_nd(guess_verify_sequence: PebbleSequence) -> BranchingProgram:
    """compile_bw da sequencia palpite-verificacao h=2, k=2 (11 estados)."""
    pytest.importorskip("networkx", reason="networkx indisponivel")
    return compile_bw(guess_verify_sequence, 2)


@pytest.fixture
def duplicate_label_bp() -> BranchingProgram:
    """Duas arestas com rotulo 1 saindo do inicio, mas declarado deterministico."""
    pytest.importorskip("networkx", reason="networkx indisponivel")
    states = {0: Leaf(2), 1: Output(1), 2: Output(2)}
    edges = [(0, 1, 1), (0, 1, 2)]
    return BranchingProgram.build(2, 2, states, edges, claimed_deterministic=True)


@pytest.fixture
def cyclic_bp() -> BranchingProgram:
    """Estados 0 e 1 formam um ciclo."""
    pytest.importorskip("networkx", reason="networkx indisponivel")
    states = {0: Leaf(2), 1: Leaf(3), 2: Output(1), 3: Output(2)}
    edges = [(0, 1, 1), (0, 2, 1), (1, 1, 0), (1, 2, 3)]
    return BranchingProgram.build(2, 2, states, edges)


@pytest.fixture
def requery_bp(fix_bp_det: BranchingProgram) -> BranchingProgram:
    """fix_bp_det precedido de um estado extra que ja consulta Leaf(2)."""
    states = {s: fix_bp_det.label(s) for s in fix_bp_det.states}
    states[9] = Leaf(2)
    edges = fix_bp_det.edges() + [(9, 1, 0), (9, 2, 0)]
    return BranchingProgram.build(2, 2, states, edges, start=9, claimed_deterministic=True)


@pytest.fixture
def retargeted_bp(fix_bp_det: BranchingProgram) -> BranchingProgram:
    """fix_bp_det com a aresta (v2=1, v3=2) -2-> saida 2 desviada para a saida 1."""
    bp = fix_bp_det.copy()
    bp.remove_edge(4, 2, 8)
    bp.add_edge(4, 2, 7)
    return bp


@pytest.fixture
def row_scanning_bp() -> BranchingProgram:
    """Consulta sempre f1(1,1), independente dos valores das folhas."""
    pytest.importorskip("networkx", reason="networkx indisponivel")
    states = {0: Func(1, 1, 1), 1: Output(1), 2: Output(2)}
    edges = [(0, 1, 1), (0, 2, 2)]
    return BranchingProgram.build(2, 2, states, edges, claimed_deterministic=True)


@pytest.fixture
def rejecting_bp() -> BranchingProgram:
    """Sem aresta para v2=2: rejeita metade das instancias."""
    pytest.importorskip("networkx", reason="networkx indisponivel")
    states = {0: Leaf(2), 1: Output(1), 2: Output(2)}
    return BranchingProgram.build(2, 2, states, [(0, 1, 1)])
