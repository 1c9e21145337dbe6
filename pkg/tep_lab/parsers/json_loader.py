"""Leitura dos formatos JSON de instancia, programa e sequencia de pebbling."""

from __future__ import annotations

import json
import logging
import re
from fractions import Fraction
from pathlib import Path
from typing import Any

from tep_lab.core.log_value import LogValue
from tep_lab.core.program import BranchingProgram, LayerInfo, Output, StateLabel
from tep_lab.core.tree import Func, Leaf, TepInstance, TreeShape
from tep_lab.errors import InvalidShapeError, TepLabError
from tep_lab.pebbling.configuration import (
    Amount,
    BlackSlide,
    DecreaseBlack,
    DecreaseWhite,
    Game,
    IncreaseBlack,
    IncreaseWhite,
    PebbleConfiguration,
    PebbleMove,
    PlaceBlackLeaf,
    RemovePebble,
    infer_move,
)
from tep_lab.pebbling.sequence import PebbleSequence
from tep_lab.version import is_format_compatible

logger = logging.getLogger(__name__)

_LOG_PATTERN = re.compile(r"^log(\d+)\(([^)]+)\)$")

_SIMPLE_MOVES = {
    "place-black-leaf": PlaceBlackLeaf,
    "remove-pebble": RemovePebble,
}
_AMOUNT_MOVES = {
    "increase-white": IncreaseWhite,
    "decrease-black": DecreaseBlack,
    "decrease-white": DecreaseWhite,
}


def parse_amount(text: Any) -> Amount:
    """'p/q', 'n' ou 'log<k>(<razao>)'."""
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    match = _LOG_PATTERN.match(str(text).strip())
    if match:
        return LogValue(Fraction(match.group(2)), int(match.group(1)))
    try:
        return Fraction(str(text))
    except ValueError:
        raise TepLabError(f"Quantidade invalida: {text!r}") from None


def parse_label(data: dict[str, Any]) -> StateLabel:
    kind = data.get("kind")
    if kind == "leaf":
        return Leaf(int(data["node"]))
    if kind == "func":
        return Func(int(data["node"]), int(data["x"]), int(data["y"]))
    if kind == "output":
        return Output(int(data["value"]))
    raise TepLabError(f"Tipo de consulta desconhecido: {kind!r}")


def parse_move(data: dict[str, Any]) -> PebbleMove:
    kind = data.get("kind")
    node = int(data["node"])
    if kind in _SIMPLE_MOVES:
        return _SIMPLE_MOVES[kind](node)
    if kind in _AMOUNT_MOVES:
        return _AMOUNT_MOVES[kind](node, parse_amount(data.get("amount", 1)))
    if kind == "black-slide":
        return BlackSlide(node, frozenset(int(c) for c in data.get("cleared", [])))
    if kind == "increase-black":
        children = tuple(
            (int(c["node"]), parse_amount(c["amount"])) for c in data.get("children", [])
        )
        return IncreaseBlack(node, parse_amount(data.get("amount", 1)), children)
    raise TepLabError(f"Movimento desconhecido: {kind!r}")


class JsonLoader:
    """Le arquivos JSON gerados pelo exportador ou escritos a mao."""

    def read(self, filepath: Path) -> dict[str, Any]:
        filepath = Path(filepath)
        if not filepath.exists():
            logger.error("Arquivo nao encontrado: %s", filepath)
            raise FileNotFoundError(filepath)
        try:
            with open(filepath, "r", encoding="utf-8") as f:
                content = json.load(f)
        except json.JSONDecodeError as exc:
            logger.error("Erro ao ler JSON %s: %s", filepath, exc)
            raise TepLabError(f"JSON invalido em {filepath}: {exc}") from exc
        if not isinstance(content, dict):
            raise TepLabError(f"Esperado objeto JSON em {filepath}")
        if not is_format_compatible(content.get("format_version")):
            raise TepLabError(
                f"Versao de formato incompativel em {filepath}: {content['format_version']}"
            )
        logger.info("Arquivo lido: %s", filepath)
        return content

    def parse_instance(self, data: dict[str, Any]) -> TepInstance:
        try:
            shape = TreeShape(int(data["h"]))
            k = int(data["k"])
            tables = {int(node): rows for node, rows in data["tables"].items()}
            return TepInstance.from_parts(shape, k, list(data["leaves"]), tables)
        except (KeyError, TypeError, AttributeError) as exc:
            raise InvalidShapeError(f"Instancia malformada: {exc}") from exc

    def parse_program(self, data: dict[str, Any]) -> BranchingProgram:
        try:
            states = {int(s["id"]): parse_label(s["query"]) for s in data["states"]}
            edges = [(int(e["from"]), int(e["label"]), int(e["to"])) for e in data["edges"]]
            bp = BranchingProgram.build(
                int(data["k"]), int(data["h"]), states, edges, start=int(data.get("start", 0))
            )
        except (KeyError, TypeError) as exc:
            raise TepLabError(f"Programa malformado: {exc}") from exc
        for layer in data.get("layers", []):
            bp.layers.append(
                LayerInfo(
                    int(layer["step"]),
                    int(layer["pebbles"]),
                    int(layer["width"]),
                    str(layer.get("query_kind", "")),
                    tuple(int(s) for s in layer.get("states", [])),
                )
            )
        return bp

    def parse_sequence(self, data: dict[str, Any]) -> PebbleSequence:
        try:
            game = Game(data["game"])
            h = int(data["h"])
            denominator = data.get("d")
            configs = [
                PebbleConfiguration.from_values(
                    game,
                    h,
                    {
                        int(node): (parse_amount(v.get("b", 0)), parse_amount(v.get("w", 0)))
                        for node, v in entry.items()
                    },
                    denominator,
                )
                for entry in data["configs"]
            ]
        except (KeyError, TypeError, ValueError) as exc:
            raise TepLabError(f"Sequencia malformada: {exc}") from exc
        if "moves" in data:
            moves: list[PebbleMove | None] = [
                parse_move(m) if m is not None else None for m in data["moves"]
            ]
        else:
            moves = [infer_move(a, b) for a, b in zip(configs, configs[1:])]
        seq = PebbleSequence(game, h, configs, moves, denominator)
        for index, marker in data.get("markers", {}).items():
            seq.markers[int(index)] = marker
        return seq

    def load_instance(self, filepath: Path) -> TepInstance:
        return self.parse_instance(self.read(filepath))

    def load_program(self, filepath: Path) -> BranchingProgram:
        return self.parse_program(self.read(filepath))

    def load_sequence(self, filepath: Path) -> PebbleSequence:
        return self.parse_sequence(self.read(filepath))
