"""Configuracao de limites de enumeracao, busca e paralelismo."""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Any

import yaml

logger = logging.getLogger(__name__)

BUDGET_ENV_VAR = "TEP_BUDGET"


@dataclass(frozen=True)
class LabSettings:
    """Limites usados pelas operacoes exaustivas."""

    enumeration_cap: int = 2**24
    path_cap: int = 100_000
    sample_size: int = 10_000
    sample_seed: int = 0
    search_state_cap: int = 5_000_000
    jobs: int = 1

    def __post_init__(self) -> None:
        for name in ("enumeration_cap", "path_cap", "sample_size", "search_state_cap", "jobs"):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool) or value <= 0:
                raise ValueError(f"Configuracao '{name}' deve ser inteiro positivo: {value!r}")
        if not isinstance(self.sample_seed, int) or self.sample_seed < 0:
            raise ValueError(f"Configuracao 'sample_seed' invalida: {self.sample_seed!r}")

    def with_overrides(self, **overrides: Any) -> LabSettings:
        """Retorna copia com os campos informados (valores None ignorados)."""
        clean = {key: value for key, value in overrides.items() if value is not None}
        return replace(self, **clean) if clean else self


def _known_fields() -> set[str]:
    return {f.name for f in fields(LabSettings)}


def _read_yaml(path: Path) -> dict[str, Any]:
    if not path.exists():
        logger.error("Arquivo de configuracao nao encontrado: %s", path)
        raise FileNotFoundError(f"Arquivo de configuracao nao encontrado: {path}")
    with open(path, "r", encoding="utf-8") as f:
        content = yaml.safe_load(f)
    if content is None:
        return {}
    if not isinstance(content, dict):
        raise ValueError(f"Configuracao deve ser um mapeamento YAML: {path}")
    unknown = set(content) - _known_fields()
    if unknown:
        raise ValueError(f"Chaves desconhecidas na configuracao: {sorted(unknown)}")
    return content


def _budget_from_env() -> int | None:
    raw = os.environ.get(BUDGET_ENV_VAR)
    if raw is None or raw.strip() == "":
        return None
    try:
        return int(raw.strip())
    except ValueError as exc:
        raise ValueError(f"{BUDGET_ENV_VAR} deve ser inteiro: {raw!r}") from exc


def load_settings(
    path: Path | None = None, overrides: dict[str, Any] | None = None
) -> LabSettings:
    """Carrega configuracao: YAML opcional, depois TEP_BUDGET, depois overrides explicitos."""
    values: dict[str, Any] = {}
    if path is not None:
        values.update(_read_yaml(Path(path)))
        logger.info("Configuracao carregada de %s", path)

    env_budget = _budget_from_env()
    if env_budget is not None:
        values["enumeration_cap"] = env_budget
        logger.info("Limite de enumeracao via %s: %d", BUDGET_ENV_VAR, env_budget)

    settings = LabSettings(**values)
    if overrides:
        settings = settings.with_overrides(**overrides)
    return settings
