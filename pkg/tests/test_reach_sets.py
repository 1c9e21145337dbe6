"""Testes para os conjuntos de alcance e valores de estado."""

from fractions import Fraction

import pytest

from tep_lab.analyzers.reach_sets import (
    StateValueProfile,
    bit_product,
    bit_projection,
    bit_width,
    count_inputs_through,
    mask_values,
    reach_sets,
    value_mask,
)
from tep_lab.core.program import BranchingProgram

pytest.importorskip("networkx", reason="networkx indisponivel")


@pytest.fixture
def det_profile(fix_bp_det: BranchingProgram) -> StateValueProfile:
    return reach_sets(fix_bp_det)


class TestMasks:
    def test_value_mask_round_trip(self) -> None:
        assert value_mask(3) == 0b100
        assert mask_values(0b101) == {1, 3}

    def test_bit_width(self) -> None:
        assert bit_width(2) == 1
        assert bit_width(8) == 3
        with pytest.raises(ValueError):
            bit_width(3)

    def test_bit_projection(self) -> None:
        assert bit_projection(0b1001, 0) == {0, 1}
        assert bit_projection(0b0011, 1) == {0}

    def test_bit_product(self) -> None:
        assert bit_product(0b0011, 4) == 0b0011
        assert bit_product(0b1001, 4) == 0b1111


class TestReachSets:
    def test_totals(self, det_profile: StateValueProfile) -> None:
        assert det_profile.total == 64
        assert det_profile.mode == "exhaustive"
        assert det_profile.reach_count[0] == 64
        assert det_profile.through_count[4] == 16

    def test_leaf3_layer(self, det_profile: StateValueProfile) -> None:
        assert det_profile.R(1, 2) == {1}
        assert det_profile.R(1, 3) == {1, 2}
        assert det_profile.R(1, 1) == {1, 2}

    def test_output_state(self, det_profile: StateValueProfile) -> None:
        assert det_profile.A(8, 1) == {2}
        assert det_profile.A(8, 2) == {1, 2}
        assert det_profile.accept_product(8) == 4

    def test_count_inputs_through(self, fix_bp_det: BranchingProgram) -> None:
        assert count_inputs_through(fix_bp_det, 8) == 32
        assert count_inputs_through(fix_bp_det, 4) == 16


class TestStateValues:
    def test_black_and_white(self, det_profile: StateValueProfile) -> None:
        assert det_profile.b(4, 2) == 1
        assert det_profile.w(4, 2) == 0
        assert det_profile.b(4, 1) == 0

    def test_p_total(self, det_profile: StateValueProfile) -> None:
        assert det_profile.p_total(0) == 0
        assert det_profile.p_total(4) == 2
        assert det_profile.p_total(8) == 1

    def test_values_at(self, det_profile: StateValueProfile) -> None:
        values = det_profile.values_at(1)
        assert set(values) == {1, 2, 3}
        assert values[2][0] == Fraction(1)

    def test_requires_complete_path(self, rejecting_bp: BranchingProgram) -> None:
        profile = reach_sets(rejecting_bp)
        assert not profile.on_complete_path(2)
        with pytest.raises(ValueError):
            profile.b(2, 1)

    def test_summary(self, det_profile: StateValueProfile) -> None:
        summary = det_profile.get_summary(4)
        assert summary["through_count"] == 16
        assert summary["A"][3] == [2]
        assert summary["p"] == "2"
