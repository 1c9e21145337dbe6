"""Testes para a busca do numero minimo de pebbles."""

from fractions import Fraction

import pytest

from tep_lab.config import LabSettings
from tep_lab.errors import BudgetExceededError
from tep_lab.pebbling.configuration import Game
from tep_lab.pebbling.search import min_pebble_number
from tep_lab.pebbling.sequence import max_pebbles, validate_sequence


class TestMinPebbleNumber:
    @pytest.mark.parametrize(
        "game, h, expected",
        [
            (Game.BLACK, 2, Fraction(2)),
            (Game.BLACK, 3, Fraction(3)),
            (Game.BLACK, 4, Fraction(4)),
            (Game.WHOLE, 2, Fraction(2)),
            (Game.WHOLE, 3, Fraction(3)),
            (Game.WHOLE, 4, Fraction(3)),
            (Game.FRACTIONAL, 2, Fraction(2)),
            (Game.FRACTIONAL, 3, Fraction(5, 2)),
        ],
    )
    def test_known_minima(self, game: Game, h: int, expected: Fraction) -> None:
        result = min_pebble_number(game, h, denominator=2)
        assert result.minimum == expected

    @pytest.mark.slow
    def test_black_h5(self) -> None:
        assert min_pebble_number(Game.BLACK, 5).minimum == 5

    @pytest.mark.slow
    def test_fractional_h4(self) -> None:
        assert min_pebble_number(Game.FRACTIONAL, 4, denominator=2).minimum == 3

    def test_witness_is_valid(self) -> None:
        result = min_pebble_number(Game.WHOLE, 3)
        assert validate_sequence(result.witness)
        assert max_pebbles(result.witness) == result.minimum
        assert result.denominator is None

    def test_budgets_tried(self) -> None:
        result = min_pebble_number(Game.FRACTIONAL, 3, denominator=2)
        assert result.budgets_tried == [
            Fraction(1, 2),
            Fraction(1),
            Fraction(3, 2),
            Fraction(2),
            Fraction(5, 2),
        ]
        assert result.denominator == 2
        assert result.states_visited > 0

    def test_black_witness_ends_at_root(self) -> None:
        result = min_pebble_number(Game.BLACK, 3)
        assert result.witness.last.entries == ((1, 1, 0),)

    def test_rejects_bad_denominator(self) -> None:
        with pytest.raises(ValueError):
            min_pebble_number(Game.FRACTIONAL, 2, denominator=0)

    def test_state_cap(self) -> None:
        with pytest.raises(BudgetExceededError):
            min_pebble_number(Game.WHOLE, 3, settings=LabSettings(search_state_cap=5))
