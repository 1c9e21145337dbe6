"""Excecoes do laboratorio TEP."""

from __future__ import annotations

from typing import Any


class TepLabError(Exception):
    """Base de todos os erros do pacote."""


class InvalidShapeError(TepLabError, ValueError):
    """Altura, aridade ou instancia fora do dominio."""


class MalformedQueryError(TepLabError, ValueError):
    """Consulta que nao existe para a arvore informada."""


class BudgetExceededError(TepLabError, RuntimeError):
    """Limite de enumeracao, de caminhos ou de busca excedido."""

    def __init__(self, message: str, limit: int, required: int | None = None) -> None:
        super().__init__(message)
        self.limit = limit
        self.required = required


class NotDeterministicError(TepLabError, ValueError):
    """Operacao exige programa deterministico."""


class NoCompletePathError(TepLabError, ValueError):
    """Nenhum caminho completo para a instancia."""


class IllegalMoveError(TepLabError, ValueError):
    """Movimento de pebbling ilegal na configuracao atual."""

    def __init__(self, rule: str, move: Any, detail: str = "") -> None:
        message = f"movimento ilegal ({rule}): {move}"
        if detail:
            message = f"{message} - {detail}"
        super().__init__(message)
        self.rule = rule
        self.move = move


class CompilationError(TepLabError, ValueError):
    """Sequencia de pebbling nao compilavel em programa."""


class AnalysisError(TepLabError, RuntimeError):
    """Premissa de uma analise violada; carrega o contraexemplo."""

    def __init__(self, message: str, context: dict[str, Any] | None = None) -> None:
        super().__init__(message)
        self.context: dict[str, Any] = dict(context or {})
