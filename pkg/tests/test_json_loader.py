"""Testes para o leitor de arquivos JSON."""

import json
from fractions import Fraction
from pathlib import Path

import pytest

from tep_lab.core.log_value import LogValue
from tep_lab.core.program import BranchingProgram, Output
from tep_lab.core.tree import Func, Leaf, TepInstance
from tep_lab.errors import InvalidShapeError, TepLabError
from tep_lab.exporters.json_exporter import JsonExporter
from tep_lab.parsers.json_loader import JsonLoader, parse_amount, parse_label, parse_move
from tep_lab.pebbling.configuration import BlackSlide, Game, IncreaseBlack, IncreaseWhite
from tep_lab.pebbling.sequence import PebbleSequence


@pytest.fixture
def loader() -> JsonLoader:
    return JsonLoader()


def write_json(path: Path, data: object) -> Path:
    path.write_text(json.dumps(data), encoding="utf-8")
    return path


class TestRead:
    def test_missing_file(self, loader: JsonLoader, tmp_path: Path) -> None:
        with pytest.raises(FileNotFoundError):
            loader.read(tmp_path / "nada.json")

    def test_invalid_json(self, loader: JsonLoader, tmp_path: Path) -> None:
        path = tmp_path / "ruim.json"
        path.write_text("{nao e json", encoding="utf-8")
        with pytest.raises(TepLabError):
            loader.read(path)

    def test_not_an_object(self, loader: JsonLoader, tmp_path: Path) -> None:
        with pytest.raises(TepLabError):
            loader.read(write_json(tmp_path / "lista.json", [1, 2]))

    def test_incompatible_version(self, loader: JsonLoader, tmp_path: Path) -> None:
        path = write_json(tmp_path / "v2.json", {"format_version": "2.0.0"})
        with pytest.raises(TepLabError, match="incompativel"):
            loader.read(path)

    def test_missing_version_is_accepted(self, loader: JsonLoader, data_dir: Path) -> None:
        assert "format_version" not in loader.read(data_dir / "fix_a.json")


class TestInstances:
    def test_load(self, fix_a: TepInstance) -> None:
        assert fix_a.leaf_values == {2: 1, 3: 2}
        assert fix_a.node_value(1) == 2

    def test_malformed(self, loader: JsonLoader) -> None:
        with pytest.raises(InvalidShapeError):
            loader.parse_instance({"h": 2, "k": 2, "leaves": [1, 2]})

    def test_exported_instance_reloads(self, loader: JsonLoader, fix_b: TepInstance) -> None:
        data = JsonExporter().export_instance(fix_b)
        assert loader.parse_instance(data) == fix_b


class TestPrograms:
    def test_parse_label(self) -> None:
        assert parse_label({"kind": "leaf", "node": 3}) == Leaf(3)
        assert parse_label({"kind": "func", "node": 1, "x": 2, "y": 1}) == Func(1, 2, 1)
        assert parse_label({"kind": "output", "value": 2}) == Output(2)
        with pytest.raises(TepLabError):
            parse_label({"kind": "bogus"})

    def test_exported_program_reloads(
        self, loader: JsonLoader, fix_bp_det: BranchingProgram
    ) -> None:
        data = JsonExporter().export_program(fix_bp_det)
        bp = loader.parse_program(data)
        assert bp.edges() == fix_bp_det.edges()
        assert [bp.label(s) for s in bp.states] == [fix_bp_det.label(s) for s in bp.states]
        assert [layer.width for layer in bp.layers] == [1, 2, 4]

    def test_malformed_program(self, loader: JsonLoader) -> None:
        with pytest.raises(TepLabError):
            loader.parse_program({"k": 2, "h": 2, "states": [{"id": 0}], "edges": []})


class TestSequences:
    def test_guess_verify(self, guess_verify_sequence: PebbleSequence) -> None:
        assert guess_verify_sequence.game is Game.WHOLE
        assert len(guess_verify_sequence) == 6
        assert guess_verify_sequence.moves[0] == IncreaseWhite(3, 1)

    def test_explicit_moves(self, loader: JsonLoader) -> None:
        data = {
            "game": "black",
            "h": 2,
            "configs": [{}, {"2": {"b": "1"}}],
            "moves": [{"kind": "place-black-leaf", "node": 2}],
            "markers": {"1": 0},
        }
        seq = loader.parse_sequence(data)
        assert seq.moves[0].kind == "place-black-leaf"
        assert seq.markers == {1: 0}

    def test_bad_game(self, loader: JsonLoader) -> None:
        with pytest.raises(TepLabError):
            loader.parse_sequence({"game": "grey", "h": 2, "configs": []})


class TestParsers:
    @pytest.mark.parametrize(
        "text, expected",
        [
            ("1/2", Fraction(1, 2)),
            (1, Fraction(1)),
            ("3", Fraction(3)),
            ("log4(2)", LogValue(Fraction(2), 4)),
        ],
    )
    def test_amounts(self, text: object, expected: object) -> None:
        assert parse_amount(text) == expected

    def test_bad_amount(self) -> None:
        with pytest.raises(TepLabError):
            parse_amount("metade")

    def test_moves(self) -> None:
        assert parse_move({"kind": "black-slide", "node": 1, "cleared": [2, 3]}) == BlackSlide(
            1, frozenset({2, 3})
        )
        move = parse_move(
            {
                "kind": "increase-black",
                "node": 1,
                "amount": "1/2",
                "children": [{"node": 2, "amount": "1/2"}],
            }
        )
        assert move == IncreaseBlack(1, Fraction(1, 2), ((2, Fraction(1, 2)),))
        with pytest.raises(TepLabError):
            parse_move({"kind": "jump", "node": 1})
