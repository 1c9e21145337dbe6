"""Testes para sequencias de pebbling."""

from fractions import Fraction

import pytest

from tep_lab.pebbling.configuration import (
    BlackSlide,
    Game,
    IncreaseBlack,
    PebbleConfiguration,
    PlaceBlackLeaf,
    RemovePebble,
)
from tep_lab.pebbling.sequence import (
    PebbleSequence,
    max_pebbles,
    optimal_black_sequence,
    validate_sequence,
)


class TestOptimalBlackSequence:
    @pytest.mark.parametrize("h, moves", [(2, 3), (3, 7), (4, 15)])
    def test_move_count(self, h: int, moves: int) -> None:
        assert optimal_black_sequence(h).move_count == moves

    @pytest.mark.parametrize("h", [2, 3, 4, 5])
    def test_uses_h_pebbles(self, h: int) -> None:
        seq = optimal_black_sequence(h)
        assert validate_sequence(seq)
        assert max_pebbles(seq) == h

    def test_h3_moves(self) -> None:
        assert optimal_black_sequence(3).moves == [
            PlaceBlackLeaf(4),
            PlaceBlackLeaf(5),
            BlackSlide(2, frozenset({4, 5})),
            PlaceBlackLeaf(6),
            PlaceBlackLeaf(7),
            BlackSlide(3, frozenset({6, 7})),
            BlackSlide(1, frozenset({2, 3})),
        ]


class TestValidateSequence:
    def test_guess_verify_is_valid(self, guess_verify_sequence: PebbleSequence) -> None:
        assert guess_verify_sequence.game is Game.WHOLE
        assert validate_sequence(guess_verify_sequence)
        assert max_pebbles(guess_verify_sequence) == 2

    def test_inferred_moves(self, guess_verify_sequence: PebbleSequence) -> None:
        assert guess_verify_sequence.moves[2] == IncreaseBlack(1, 1, ((2, 1),))

    def test_black_must_end_at_root(self) -> None:
        seq = optimal_black_sequence(2)
        seq.apply(RemovePebble(1))
        verdict = validate_sequence(seq)
        assert not verdict
        assert verdict.first_illegal_index == 4

    def test_whole_must_end_empty(self, guess_verify_sequence: PebbleSequence) -> None:
        seq = PebbleSequence(
            Game.WHOLE,
            2,
            guess_verify_sequence.configurations[:-1],
            guess_verify_sequence.moves[:-1],
        )
        assert not validate_sequence(seq)

    def test_missing_move(self) -> None:
        empty = PebbleConfiguration.empty(Game.BLACK, 2)
        both = PebbleConfiguration.from_values(Game.BLACK, 2, {2: (1, 0), 3: (1, 0)})
        seq = PebbleSequence.from_configurations(Game.BLACK, 2, [empty, both])
        verdict = validate_sequence(seq)
        assert verdict.first_illegal_index == 1
        assert "nenhum movimento" in verdict.reason

    def test_declared_move_mismatch(self) -> None:
        seq = optimal_black_sequence(2)
        seq.moves[0] = PlaceBlackLeaf(3)
        verdict = validate_sequence(seq)
        assert verdict.first_illegal_index == 1

    def test_illegal_move_reports_rule(self) -> None:
        seq = PebbleSequence.start(Game.BLACK, 2)
        seq.configurations.append(PebbleConfiguration.from_values(Game.BLACK, 2, {1: (1, 0)}))
        seq.moves.append(BlackSlide(1))
        verdict = validate_sequence(seq)
        assert verdict.reason == "movimento ilegal: children-fully-pebbled"


class TestSequenceHelpers:
    def test_markers(self) -> None:
        seq = PebbleSequence.start(Game.BLACK, 2)
        seq.mark(0)
        seq.apply(PlaceBlackLeaf(2), marker=1)
        seq.apply(PlaceBlackLeaf(3))
        seq.mark(1)
        assert seq.configuration_at_marker(1) == seq.last
        assert seq.configuration_at_marker(0).is_empty()
        assert seq.configuration_at_marker(7) is None

    def test_to_dict(self) -> None:
        data = optimal_black_sequence(2).to_dict()
        assert data["game"] == "black"
        assert data["configs"][0] == {}
        assert data["configs"][-1] == {"1": {"b": "1", "w": "0"}}
        assert data["moves"][-1] == {"kind": "black-slide", "node": 1, "cleared": [2, 3]}

    def test_max_pebbles_fractional(self) -> None:
        seq = PebbleSequence.start(Game.FRACTIONAL, 2, denominator=2)
        seq.apply(IncreaseBlack(2, Fraction(1, 2)))
        assert max_pebbles(seq) == Fraction(1, 2)
