"""Testes para a CLI."""

import json
from pathlib import Path

import pytest

from tep_lab.cli import EXIT_FAIL, EXIT_PASS, EXIT_USAGE, create_parser, main
from tep_lab.core.program import BranchingProgram
from tep_lab.exporters.json_exporter import JsonExporter
from tep_lab.parsers.json_loader import JsonLoader
from tep_lab.pebbling.sequence import optimal_black_sequence

pytest.importorskip("networkx", reason="networkx indisponivel")


def write_program(bp: BranchingProgram, path: Path) -> Path:
    exporter = JsonExporter()
    exporter.export_to_file(exporter.export_program(bp), path)
    return path


@pytest.fixture
def det_program(fix_bp_det: BranchingProgram, tmp_path: Path) -> Path:
    return write_program(fix_bp_det, tmp_path / "det.json")


class TestParser:
    def test_version(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert main(["--version"]) == EXIT_PASS
        assert "tep-lab" in capsys.readouterr().out

    def test_no_command(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert main([]) == EXIT_PASS
        assert "usage" in capsys.readouterr().out

    @pytest.mark.parametrize(
        "argv",
        [
            ["gen", "--h", "1", "--k", "2", "--output", "x.json"],
            ["gen", "--h", "2", "--k", "1", "--output", "x.json"],
            ["pebble", "--game", "grey", "--h", "2"],
            ["census", "p.json"],
        ],
    )
    def test_usage_errors(self, argv: list[str]) -> None:
        assert main(argv) == EXIT_USAGE

    def test_check_flags(self) -> None:
        args = create_parser().parse_args(["check", "p.json", "--null-path-free"])
        assert args.null_path_free
        assert not args.thrifty


class TestGenAndPebble:
    def test_gen(self, tmp_path: Path) -> None:
        output = tmp_path / "inst.json"
        assert main(["gen", "--h", "3", "--k", "2", "--seed", "7", "--output", str(output)]) == 0
        instance = JsonLoader().load_instance(output)
        assert instance.shape.h == 3
        assert instance.k == 2

    def test_pebble_black(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        output = tmp_path / "witness.json"
        assert main(["pebble", "--game", "black", "--h", "2", "--output", str(output)]) == 0
        out = capsys.readouterr().out
        assert "min=3" in out
        assert "tempo: " in out
        assert JsonLoader().load_sequence(output).game.value == "black"


class TestCompile:
    def test_compile_black_witness(self, tmp_path: Path) -> None:
        witness = tmp_path / "witness.json"
        JsonExporter().export_to_file(optimal_black_sequence(2).to_dict(), witness)
        output = tmp_path / "bp.json"
        assert main(["compile", str(witness), "--k", "2", "--output", str(output)]) == 0
        assert JsonLoader().load_program(output).state_count() == 9

    def test_invalid_witness(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        witness = tmp_path / "ruim.json"
        witness.write_text(
            json.dumps({"game": "black", "h": 2, "configs": [{}, {"1": {"b": "1"}}]}),
            encoding="utf-8",
        )
        output = tmp_path / "bp.json"
        assert main(["compile", str(witness), "--k", "2", "--output", str(output)]) == EXIT_USAGE
        assert "indice 1" in capsys.readouterr().out
        assert not output.exists()


class TestCheck:
    def test_passing_checks(self, det_program: Path, tmp_path: Path) -> None:
        report = tmp_path / "report.json"
        argv = ["check", str(det_program), "--structure", "--deterministic", "--computes"]
        argv.append("--composable")
        assert main(argv + ["--output", str(report)]) == EXIT_PASS
        data = json.loads(report.read_text(encoding="utf-8"))
        checks = [r["check"] for r in data["results"]]
        assert checks == ["structure", "deterministic", "computes", "composable"]
        assert all(r["passed"] for r in data["results"])

    def test_failing_check(self, rejecting_bp: BranchingProgram, tmp_path: Path) -> None:
        program = write_program(rejecting_bp, tmp_path / "rejecting.json")
        assert main(["check", str(program), "--computes"]) == EXIT_FAIL

    def test_missing_program(self, tmp_path: Path) -> None:
        assert main(["check", str(tmp_path / "nada.json")]) == EXIT_USAGE


class TestAnalyzeAndCensus:
    def test_analyze_instance(self, det_program: Path, data_dir: Path, tmp_path: Path) -> None:
        output = tmp_path / "trace.json"
        argv = ["analyze", str(det_program), "--pipeline", "det-thrifty"]
        argv += ["--instance", str(data_dir / "fix_a.json"), "--output", str(output)]
        assert main(argv) == EXIT_PASS
        data = json.loads(output.read_text(encoding="utf-8"))
        assert data["states"] == [0, 1, 4, 8]
        assert data["output"] == 2
        assert data["supercritical"] == 4

    def test_analyze_all(self, det_program: Path) -> None:
        argv = ["analyze", str(det_program), "--pipeline", "det-thrifty", "--all"]
        assert main(argv) == EXIT_PASS

    def test_census_text(self, det_program: Path, capsys: pytest.CaptureFixture[str]) -> None:
        argv = ["--format", "text", "census", str(det_program), "--pipeline", "ro-det"]
        assert main(argv) == EXIT_PASS
        assert "verdict: pass" in capsys.readouterr().out

    def test_census_timings(self, det_program: Path, tmp_path: Path) -> None:
        output = tmp_path / "census.json"
        argv = ["census", str(det_program), "--pipeline", "ro-det", "--output", str(output)]
        assert main(argv) == EXIT_PASS
        timings = json.loads(output.read_text(encoding="utf-8"))["timings"]
        assert [s["stage"] for s in timings["stages"]] == ["census-ro-det"]
        assert timings["stages"][0]["items"] == 64

    def test_census_budget(self, det_program: Path) -> None:
        argv = ["--enumeration-cap", "10", "census", str(det_program), "--pipeline", "ro-det"]
        assert main(argv) == EXIT_USAGE


class TestExport:
    def test_export_program(self, det_program: Path, tmp_path: Path) -> None:
        output = tmp_path / "bp.dot"
        assert main(["export", str(det_program), "--output", str(output)]) == EXIT_PASS
        assert output.read_text(encoding="utf-8").startswith('digraph "Branching Program"')

    def test_export_trace(self, det_program: Path, data_dir: Path, tmp_path: Path) -> None:
        output = tmp_path / "trace.dot"
        argv = ["export", str(det_program), "--instance", str(data_dir / "fix_a.json")]
        assert main(argv + ["--output", str(output)]) == EXIT_PASS
        assert output.read_text(encoding="utf-8").startswith('digraph "Trace"')
