"""Testes para configuracoes e movimentos de pebbling."""

from fractions import Fraction

import pytest

from tep_lab.errors import IllegalMoveError
from tep_lab.pebbling.configuration import (
    BlackSlide,
    DecreaseBlack,
    DecreaseWhite,
    Game,
    IncreaseBlack,
    IncreaseWhite,
    PebbleConfiguration,
    PlaceBlackLeaf,
    RemovePebble,
    apply_move,
    infer_move,
    move_to_dict,
)


def black(h: int, *nodes: int) -> PebbleConfiguration:
    return PebbleConfiguration.from_values(Game.BLACK, h, {n: (1, 0) for n in nodes})


def rule_of(config: PebbleConfiguration, move: object) -> str:
    with pytest.raises(IllegalMoveError) as exc_info:
        apply_move(config, move)  # type: ignore[arg-type]
    return exc_info.value.rule


class TestConfiguration:
    def test_from_values_drops_zero_entries(self) -> None:
        config = PebbleConfiguration.from_values(Game.WHOLE, 2, {2: (1, 0), 3: (0, 0)})
        assert config.pebbled_nodes == (2,)

    def test_accessors(self) -> None:
        config = PebbleConfiguration.from_values(Game.WHOLE, 2, {2: (1, 0), 3: (0, 1)})
        assert config.black_nodes == (2,)
        assert config.white_nodes == (3,)
        assert config.cost == 2
        assert config.b(1) == 0
        assert config.is_fully_pebbled(3)
        assert str(config) == "{b2,w3}"

    def test_fractional_str(self) -> None:
        config = PebbleConfiguration.from_values(
            Game.FRACTIONAL, 3, {4: (Fraction(1, 2), 0)}, denominator=2
        )
        assert str(config) == "{4:(b=1/2,w=0)}"
        assert config.cost == Fraction(1, 2)


class TestBlackGame:
    def test_slide_clears_children(self) -> None:
        config = apply_move(black(2, 2, 3), BlackSlide(1, frozenset({2, 3})))
        assert config == black(2, 1)

    def test_slide_keeps_uncleared_child(self) -> None:
        config = apply_move(black(2, 2, 3), BlackSlide(1, frozenset({2})))
        assert config == black(2, 1, 3)

    def test_place_on_leaf(self) -> None:
        assert apply_move(black(2), PlaceBlackLeaf(2)) == black(2, 2)

    @pytest.mark.parametrize(
        "config, move, rule",
        [
            (black(2), PlaceBlackLeaf(1), "place-on-leaf"),
            (black(2), PlaceBlackLeaf(4), "node-exists"),
            (black(2, 2), PlaceBlackLeaf(2), "node-unpebbled"),
            (black(2, 2), BlackSlide(1), "children-fully-pebbled"),
            (black(2, 2, 3), BlackSlide(2), "slide-on-internal"),
            (black(3, 2, 3), BlackSlide(1, frozenset({4})), "clear-children-only"),
            (black(2), RemovePebble(2), "remove-black-pebble"),
            (black(2), IncreaseWhite(2), "black-game-moves"),
        ],
    )
    def test_illegal_moves(
        self, config: PebbleConfiguration, move: object, rule: str
    ) -> None:
        assert rule_of(config, move) == rule


class TestWholeAndFractional:
    def test_internal_increase_with_child_decrease(self) -> None:
        config = PebbleConfiguration.from_values(Game.WHOLE, 2, {2: (1, 0), 3: (0, 1)})
        result = apply_move(config, IncreaseBlack(1, 1, ((2, 1),)))
        assert result.values() == {1: (1, 0), 3: (0, 1)}

    def test_white_bounds(self) -> None:
        config = apply_move(PebbleConfiguration.empty(Game.WHOLE, 2), IncreaseWhite(3))
        assert rule_of(config, IncreaseWhite(3)) == "bounds"

    def test_decrease_white_on_internal_needs_children(self) -> None:
        config = PebbleConfiguration.from_values(Game.WHOLE, 2, {1: (0, 1)})
        assert rule_of(config, DecreaseWhite(1)) == "children-fully-pebbled"

    def test_decrease_black_bounds(self) -> None:
        config = PebbleConfiguration.empty(Game.WHOLE, 2)
        assert rule_of(config, DecreaseBlack(2)) == "bounds"

    def test_whole_game_rejects_fractions(self) -> None:
        config = PebbleConfiguration.empty(Game.WHOLE, 2)
        move = IncreaseBlack(2, Fraction(1, 2))
        assert rule_of(config, move) == "whole-unit-amounts"

    def test_granularity(self) -> None:
        config = PebbleConfiguration.empty(Game.FRACTIONAL, 2, denominator=2)
        assert apply_move(config, IncreaseBlack(2, Fraction(1, 2))).b(2) == Fraction(1, 2)
        assert rule_of(config, IncreaseBlack(2, Fraction(1, 3))) == "granularity"

    def test_leaf_increase_has_no_children(self) -> None:
        config = PebbleConfiguration.empty(Game.WHOLE, 2)
        assert rule_of(config, IncreaseBlack(2, 1, ((3, 1),))) == "leaf-has-no-children"


class TestInferMove:
    def test_black_moves(self) -> None:
        assert infer_move(black(2), black(2, 2)) == PlaceBlackLeaf(2)
        assert infer_move(black(2, 2, 3), black(2, 1)) == BlackSlide(1, frozenset({2, 3}))
        assert infer_move(black(2, 2), black(2)) == RemovePebble(2)

    def test_no_change_or_ambiguous(self) -> None:
        assert infer_move(black(2, 2), black(2, 2)) is None
        assert infer_move(black(2), black(2, 2, 3)) is None

    def test_whole_moves(self) -> None:
        empty = PebbleConfiguration.empty(Game.WHOLE, 2)
        white = PebbleConfiguration.from_values(Game.WHOLE, 2, {3: (0, 1)})
        assert infer_move(empty, white) == IncreaseWhite(3, 1)
        assert infer_move(white, empty) == DecreaseWhite(3, 1)

    def test_increase_with_decreases(self) -> None:
        before = PebbleConfiguration.from_values(Game.WHOLE, 2, {2: (1, 0), 3: (0, 1)})
        after = PebbleConfiguration.from_values(Game.WHOLE, 2, {1: (1, 0), 3: (0, 1)})
        assert infer_move(before, after) == IncreaseBlack(1, 1, ((2, 1),))

    def test_mixed_change_on_one_node(self) -> None:
        before = PebbleConfiguration.from_values(Game.WHOLE, 2, {3: (1, 0)})
        after = PebbleConfiguration.from_values(Game.WHOLE, 2, {3: (0, 1)})
        assert infer_move(before, after) is None


class TestMoveToDict:
    def test_slide(self) -> None:
        data = move_to_dict(BlackSlide(1, frozenset({3, 2})))
        assert data == {"kind": "black-slide", "node": 1, "cleared": [2, 3]}

    def test_increase_with_children(self) -> None:
        data = move_to_dict(IncreaseBlack(1, 1, ((2, Fraction(1, 2)),)))
        assert data["amount"] == "1"
        assert data["children"] == [{"node": 2, "amount": "1/2"}]
