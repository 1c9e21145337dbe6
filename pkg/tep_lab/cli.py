"""Interface de linha de comando do tep-pebbling-lab."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Callable

from tep_lab import __version__
from tep_lab.config import LabSettings, load_settings
from tep_lab.errors import AnalysisError, BudgetExceededError, TepLabError

logger = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

CHECKS = (
    "structure",
    "deterministic",
    "computes",
    "thrifty",
    "syntactic-ro",
    "semantic-ro",
    "null-path-free",
    "composable",
    "node-independent",
    "bitwise-independent",
    "counting-bound",
)


def setup_logging(verbosity: int) -> None:
    """Configura logging baseado no nivel de verbosidade."""
    levels = {0: logging.WARNING, 1: logging.INFO, 2: logging.DEBUG}
    level = levels.get(verbosity, logging.DEBUG)

    handler = logging.StreamHandler()
    handler.setFormatter(logging.Formatter("%(asctime)s [%(levelname)s] %(name)s: %(message)s"))

    root_logger = logging.getLogger()
    root_logger.setLevel(level)
    root_logger.addHandler(handler)


def _height(text: str) -> int:
    value = int(text)
    if value < 2:
        raise argparse.ArgumentTypeError(f"h deve ser >= 2: {value}")
    return value


def _arity(text: str) -> int:
    value = int(text)
    if value < 2:
        raise argparse.ArgumentTypeError(f"k deve ser >= 2: {value}")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"valor deve ser positivo: {value}")
    return value


def create_parser() -> argparse.ArgumentParser:
    """Cria parser de argumentos da CLI."""
    from tep_lab.analyzers.census import PIPELINES

    parser = argparse.ArgumentParser(
        prog="tep-lab",
        description="Laboratorio de pebbling e programas ramificados para o TEP",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "-v",
        "--verbose",
        action="count",
        default=0,
        help="Aumenta verbosidade (use -vv para debug)",
    )
    parser.add_argument("--config", type=Path, help="Arquivo YAML com limites de execucao")
    parser.add_argument("--enumeration-cap", type=_positive, help="Limite de enumeracao")
    parser.add_argument("--sample-size", type=_positive, help="Instancias no modo amostrado")
    parser.add_argument(
        "--format", choices=["json", "text"], default="json", help="Formato do relatorio"
    )

    subparsers = parser.add_subparsers(dest="command", help="Comandos disponiveis")

    gen_cmd = subparsers.add_parser("gen", help="Gera uma instancia aleatoria")
    gen_cmd.add_argument("--h", type=_height, required=True)
    gen_cmd.add_argument("--k", type=_arity, required=True)
    gen_cmd.add_argument("--seed", type=int, default=0)
    gen_cmd.add_argument("--output", type=Path, required=True)

    pebble_cmd = subparsers.add_parser("pebble", help="Busca o numero minimo de pebbles")
    pebble_cmd.add_argument("--game", choices=["black", "whole", "fractional"], required=True)
    pebble_cmd.add_argument("--h", type=_height, required=True)
    pebble_cmd.add_argument("--d", type=_positive, default=2, help="Granularidade 1/d")
    pebble_cmd.add_argument("--output", type=Path, help="Arquivo da testemunha")

    compile_cmd = subparsers.add_parser("compile", help="Compila pebbling em programa")
    compile_cmd.add_argument("witness", type=Path)
    compile_cmd.add_argument("--k", type=_arity, required=True)
    compile_cmd.add_argument("--output", type=Path, required=True)

    check_cmd = subparsers.add_parser("check", help="Verifica restricoes de um programa")
    check_cmd.add_argument("program", type=Path)
    for name in CHECKS:
        check_cmd.add_argument(f"--{name}", action="store_true")
    check_cmd.add_argument("--output", type=Path, help="Arquivo do relatorio")

    analyze_cmd = subparsers.add_parser("analyze", help="Analisa caminhos de um programa")
    analyze_cmd.add_argument("program", type=Path)
    analyze_cmd.add_argument("--pipeline", choices=sorted(PIPELINES), required=True)
    target = analyze_cmd.add_mutually_exclusive_group(required=True)
    target.add_argument("--instance", type=Path)
    target.add_argument("--all", action="store_true")
    analyze_cmd.add_argument("--jobs", type=_positive)
    analyze_cmd.add_argument("--output", type=Path)

    census_cmd = subparsers.add_parser("census", help="Censo de estados supercriticos")
    census_cmd.add_argument("program", type=Path)
    census_cmd.add_argument("--pipeline", choices=sorted(PIPELINES), required=True)
    census_cmd.add_argument("--jobs", type=_positive)
    census_cmd.add_argument("--output", type=Path)

    export_cmd = subparsers.add_parser("export", help="Exporta programa ou traco em DOT")
    export_cmd.add_argument("program", type=Path)
    export_cmd.add_argument("--instance", type=Path, help="Exporta o traco desta instancia")
    export_cmd.add_argument("--output", type=Path, required=True)

    return parser


def _settings(args: argparse.Namespace) -> LabSettings:
    overrides: dict[str, Any] = {}
    if args.enumeration_cap is not None:
        overrides["enumeration_cap"] = args.enumeration_cap
    if args.sample_size is not None:
        overrides["sample_size"] = args.sample_size
    if getattr(args, "jobs", None) is not None:
        overrides["jobs"] = args.jobs
    return load_settings(args.config, overrides)


def _text_lines(data: Any, prefix: str = "") -> list[str]:
    if isinstance(data, dict):
        lines: list[str] = []
        for key, value in data.items():
            if isinstance(value, (dict, list)) and value:
                lines.append(f"{prefix}{key}:")
                lines.extend(_text_lines(value, prefix + "  "))
            else:
                lines.append(f"{prefix}{key}: {value}")
        return lines
    if isinstance(data, list):
        return [line for item in data for line in _text_lines(item, prefix + "- ")]
    return [f"{prefix}{data}"]


def _emit(args: argparse.Namespace, data: Any) -> None:
    from tep_lab.exporters.json_exporter import JsonExporter

    exporter = JsonExporter()
    output = getattr(args, "output", None)
    if output is not None:
        exporter.export_to_file(data, output)
    if args.format == "text":
        print("\n".join(_text_lines(data)))
    elif output is None:
        print(exporter.export_to_string(data))


def run_gen(args: argparse.Namespace) -> int:
    """Executa comando gen."""
    from tep_lab.core.tree import sample_instance
    from tep_lab.exporters.json_exporter import JsonExporter

    instance = sample_instance(args.h, args.k, args.seed)
    JsonExporter().export_to_file(JsonExporter().export_instance(instance), args.output)
    print(f"Instancia h={args.h} k={args.k} com {instance.m} slots: {args.output}")
    return EXIT_PASS


def run_pebble(args: argparse.Namespace) -> int:
    """Executa comando pebble."""
    from tep_lab.exporters.json_exporter import JsonExporter
    from tep_lab.pebbling.configuration import Game
    from tep_lab.pebbling.search import min_pebble_number
    from tep_lab.pebbling.sequence import validate_sequence
    from tep_lab.utils.performance import PerformanceTracker

    tracker = PerformanceTracker()
    with tracker.track(f"pebble-{args.game}") as stage:
        result = min_pebble_number(Game(args.game), args.h, args.d, _settings(args))
        stage.items = result.states_visited
    verdict = validate_sequence(result.witness)
    if args.output is not None:
        JsonExporter().export_to_file(result.witness.to_dict(), args.output)
    print(f"min={result.minimum}")
    print(f"witness: {len(result.witness.moves)} movimentos, valida={verdict.valid}")
    print(f"tempo: {tracker.get_total_time():.2f}ms")
    return EXIT_PASS if verdict else EXIT_FAIL


def run_compile(args: argparse.Namespace) -> int:
    """Executa comando compile."""
    from tep_lab.exporters.json_exporter import JsonExporter
    from tep_lab.parsers.json_loader import JsonLoader
    from tep_lab.pebbling.configuration import Game
    from tep_lab.pebbling.sequence import validate_sequence
    from tep_lab.synthesis.compiler import compile_black, compile_bw
    from tep_lab.synthesis.size_report import size_report

    seq = JsonLoader().load_sequence(args.witness)
    verdict = validate_sequence(seq)
    if not verdict:
        logger.error("Testemunha invalida: %s", verdict.reason)
        print(f"Testemunha invalida no indice {verdict.first_illegal_index}: {verdict.reason}")
        return EXIT_USAGE
    bp = compile_black(seq, args.k) if seq.game is Game.BLACK else compile_bw(seq, args.k)
    exporter = JsonExporter()
    exporter.export_to_file(exporter.export_program(bp), args.output)
    report = size_report(bp)
    print(f"Programa: {bp.state_count()} estados, camadas {report.widths}: {args.output}")
    return EXIT_PASS


def _run_checks(args: argparse.Namespace, settings: LabSettings) -> list[dict[str, Any]]:
    from tep_lab.parsers.json_loader import JsonLoader
    from tep_lab.validators import independence_checker as ind
    from tep_lab.validators import restriction_checker as rc
    from tep_lab.validators.structure_validator import validate_bp

    bp = JsonLoader().load_program(args.program)
    selected = [name for name in CHECKS if getattr(args, name.replace("-", "_"))]
    if not selected:
        selected = ["structure"]

    runners: dict[str, Callable[[], Any]] = {
        "structure": lambda: validate_bp(bp),
        "deterministic": lambda: rc.check_determinism(bp),
        "computes": lambda: rc.computes_tep(bp, settings),
        "thrifty": lambda: rc.check_thrifty(bp, settings),
        "syntactic-ro": lambda: rc.check_syntactic_read_once(bp),
        "semantic-ro": lambda: rc.check_semantic_read_once(bp, settings),
        "null-path-free": lambda: rc.check_null_path_free(bp, settings),
        "composable": lambda: rc.check_composability(bp, settings),
        "node-independent": lambda: ind.check_node_independent(bp, settings),
        "bitwise-independent": lambda: ind.check_bitwise_independent(bp, settings),
        "counting-bound": lambda: ind.check_counting_bound(bp, settings=settings),
    }
    results = []
    for name in selected:
        outcome = runners[name]()
        data = outcome.to_dict()
        data["check"] = name
        data["passed"] = bool(outcome.valid) if name == "structure" else bool(outcome)
        results.append(data)
    return results


def run_check(args: argparse.Namespace) -> int:
    """Executa comando check."""
    results = _run_checks(args, _settings(args))
    _emit(args, {"program": str(args.program), "results": results})
    return EXIT_PASS if all(r["passed"] for r in results) else EXIT_FAIL


def _census(args: argparse.Namespace) -> int:
    from tep_lab.analyzers.census import bottleneck_census
    from tep_lab.core.tree import instance_count
    from tep_lab.parsers.json_loader import JsonLoader
    from tep_lab.utils.performance import PerformanceTracker

    settings = _settings(args)
    bp = JsonLoader().load_program(args.program)
    tracker = PerformanceTracker()
    with tracker.track(f"census-{args.pipeline}", instance_count(bp.shape.h, bp.k)):
        report = bottleneck_census(bp, args.pipeline, settings)
    data = report.to_dict()
    data["timings"] = tracker.get_summary()
    _emit(args, data)
    return EXIT_PASS if report.passed else EXIT_FAIL


def _analyze_instance(args: argparse.Namespace) -> int:
    from tep_lab.analyzers import critical_states as cs
    from tep_lab.analyzers import independent_schedule as ind
    from tep_lab.analyzers import pebbling_algorithm as pa
    from tep_lab.analyzers import read_once_pebbling as ro
    from tep_lab.analyzers.reach_sets import reach_sets
    from tep_lab.core.execution import canonical_path
    from tep_lab.parsers.json_loader import JsonLoader

    loader = JsonLoader()
    bp = loader.load_program(args.program)
    instance = loader.load_instance(args.instance)
    path = canonical_path(bp, instance)
    data: dict[str, Any] = {
        "pipeline": args.pipeline,
        "states": list(path.states),
        "queries": [str(q) if q is not None else None for q in path.queries],
        "output": path.output,
    }
    if args.pipeline == "det-thrifty":
        sequence = cs.det_thrifty_pebbling(path)
        data["pebbling"] = sequence.to_dict()
        data["supercritical"] = cs.det_thrifty_supercritical(path)
        data["tag"] = cs.det_thrifty_tag(path).to_dict()
    elif args.pipeline == "ro-thrifty":
        data["pebbling"] = ro.ro_thrifty_bw_pebbling(path).to_dict()
        data["supercritical"] = ro.ro_supercritical(path)
        data["tag"] = ro.semantic_ro_tag(path).to_dict()
    elif args.pipeline == "ro-det":
        trace = pa.pebbling_trace(path)
        index = pa.ro_det_supercritical_index(trace)
        data["trace"] = trace.to_dict(index)
        data["efficient"] = pa.check_efficient(path, trace)
        data["supercritical"] = path.states[index]
        data["invariant_violations"] = pa.check_trace_invariants(trace, instance)
    else:
        variants = {"bitwise-thrifty": ind.BITWISE_THRIFTY, "ni-ro": ind.NODE_INDEPENDENT_RO}
        variant = variants[args.pipeline]
        profile = reach_sets(bp, _settings(args))
        schedule = ind.independent_schedule(bp, path, variant, profile)
        state, value = ind.independent_supercritical(path, schedule, variant)
        data["schedule"] = schedule.to_dict()
        data["supercritical"] = state
        data["effective_value"] = str(value)
    _emit(args, data)
    return EXIT_PASS


def run_analyze(args: argparse.Namespace) -> int:
    """Executa comando analyze: traco de uma instancia ou censo completo."""
    if args.all:
        return _census(args)
    return _analyze_instance(args)


def run_census(args: argparse.Namespace) -> int:
    """Executa comando census."""
    return _census(args)


def run_export(args: argparse.Namespace) -> int:
    """Executa comando export."""
    from tep_lab.analyzers.pebbling_algorithm import pebbling_trace, ro_det_supercritical_index
    from tep_lab.core.execution import run_deterministic
    from tep_lab.exporters.graphviz_exporter import GraphvizExporter, trace_to_dot
    from tep_lab.parsers.json_loader import JsonLoader

    loader = JsonLoader()
    bp = loader.load_program(args.program)
    if args.instance is None:
        GraphvizExporter(bp).export_to_file(args.output)
    else:
        path = run_deterministic(bp, loader.load_instance(args.instance))
        trace = pebbling_trace(path)
        dot = trace_to_dot(trace, ro_det_supercritical_index(trace))
        args.output.parent.mkdir(parents=True, exist_ok=True)
        args.output.write_text(dot, encoding="utf-8")
    print(f"DOT exportado: {args.output}")
    return EXIT_PASS


COMMAND_MAP: dict[str, Callable[[argparse.Namespace], int]] = {
    "gen": run_gen,
    "pebble": run_pebble,
    "compile": run_compile,
    "check": run_check,
    "analyze": run_analyze,
    "census": run_census,
    "export": run_export,
}


def main(argv: list[str] | None = None) -> int:
    """Ponto de entrada principal da CLI."""
    parser = create_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE

    setup_logging(args.verbose)

    if not args.command:
        parser.print_help()
        return EXIT_PASS

    command_func = COMMAND_MAP[args.command]
    try:
        return command_func(args)
    except BudgetExceededError as exc:
        logger.error("Limite excedido: %s (limite=%s)", exc, exc.limit)
        print(f"Limite excedido: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except AnalysisError as exc:
        logger.error("Contraexemplo: %s %s", exc, exc.context)
        print(f"Contraexemplo: {exc} {exc.context}", file=sys.stderr)
        return EXIT_FAIL
    except (TepLabError, OSError, ValueError) as exc:
        logger.error("Erro de entrada: %s", exc)
        print(f"Erro: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

