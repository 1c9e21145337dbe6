"""Testes para independencia por no/bit e o limite de contagem."""

from fractions import Fraction

import pytest

from tep_lab.analyzers.reach_sets import reach_sets
from tep_lab.config import LabSettings
from tep_lab.core.program import BranchingProgram
from tep_lab.pebbling.sequence import optimal_black_sequence
from tep_lab.synthesis.compiler import compile_black
from tep_lab.validators.independence_checker import (
    check_bitwise_independent,
    check_counting_bound,
    check_node_independent,
    counting_bound,
)
from tep_lab.validators.restriction_checker import reconfirm

pytest.importorskip("networkx", reason="networkx indisponivel")


class TestNodeIndependence:
    def test_black_program(self, fix_bp_det: BranchingProgram) -> None:
        assert check_node_independent(fix_bp_det)

    def test_guess_verify_fails(self, fix_bp_nd: BranchingProgram) -> None:
        verdict = check_node_independent(fix_bp_nd)
        assert not verdict
        assert verdict.witness is not None
        assert verdict.witness["kind"] in ("reach", "through")
        assert verdict.witness["in_rectangle"] != verdict.witness["member"]
        assert reconfirm(fix_bp_nd, verdict)

    def test_reuses_profile(self, fix_bp_det: BranchingProgram) -> None:
        profile = reach_sets(fix_bp_det)
        assert check_node_independent(fix_bp_det, profile=profile).instances_checked == 64


class TestBitwiseIndependence:
    def test_black_program(self, fix_bp_det: BranchingProgram) -> None:
        assert check_bitwise_independent(fix_bp_det)

    def test_rejects_k_not_power_of_two(self) -> None:
        bp = compile_black(optimal_black_sequence(2), 3)
        with pytest.raises(ValueError):
            check_bitwise_independent(bp)

    def test_k4_sampled(self) -> None:
        bp = compile_black(optimal_black_sequence(2), 4)
        settings = LabSettings(sample_size=3000)
        verdict = check_bitwise_independent(bp, settings)
        assert verdict
        assert verdict.mode == "sampled"


class TestCountingBound:
    def test_equality_on_black_program(self, fix_bp_det: BranchingProgram) -> None:
        profile = reach_sets(fix_bp_det)
        assert counting_bound(profile, 4) == Fraction(16)
        assert counting_bound(profile, 8) == Fraction(32)
        assert check_counting_bound(fix_bp_det, profile)

    def test_guess_verify(self, fix_bp_nd: BranchingProgram) -> None:
        assert check_counting_bound(fix_bp_nd)
