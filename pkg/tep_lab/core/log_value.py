"""Valores exatos na escala log_k, usados nos valores de pebble de estado."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Exponent = Union[int, Fraction]

_MAX_DENOMINATOR = 64


@dataclass(frozen=True, eq=False)
class LogValue:
    """log_base(ratio) com ratio racional positivo; comparacoes sempre inteiras."""

    ratio: Fraction
    base: int

    def __post_init__(self) -> None:
        ratio = Fraction(self.ratio)
        if ratio <= 0:
            raise ValueError(f"Razao deve ser positiva: {self.ratio}")
        if self.base < 2:
            raise ValueError(f"Base deve ser >= 2: {self.base}")
        object.__setattr__(self, "ratio", ratio)

    @classmethod
    def of(cls, numerator: int, denominator: int, base: int) -> LogValue:
        return cls(Fraction(numerator, denominator), base)

    @classmethod
    def from_exponent(cls, exponent: int, base: int) -> LogValue:
        return cls(Fraction(base) ** exponent, base)

    def _coerce(self, other: object) -> LogValue | None:
        if isinstance(other, LogValue):
            if other.base != self.base:
                raise ValueError(f"Bases diferentes: {self.base} e {other.base}")
            return other
        if isinstance(other, int) and not isinstance(other, bool):
            return LogValue.from_exponent(other, self.base)
        return None

    def __add__(self, other: object) -> LogValue:
        coerced = self._coerce(other)
        if coerced is None:
            return NotImplemented
        return LogValue(self.ratio * coerced.ratio, self.base)

    __radd__ = __add__

    def __sub__(self, other: object) -> LogValue:
        coerced = self._coerce(other)
        if coerced is None:
            return NotImplemented
        return LogValue(self.ratio / coerced.ratio, self.base)

    def __rsub__(self, other: object) -> LogValue:
        coerced = self._coerce(other)
        if coerced is None:
            return NotImplemented
        return LogValue(coerced.ratio / self.ratio, self.base)

    def __neg__(self) -> LogValue:
        return LogValue(1 / self.ratio, self.base)

    def compare(self, other: LogValue | Exponent) -> int:
        """Sinal de (self - other), sem logaritmos em ponto flutuante."""
        if isinstance(other, LogValue):
            if other.base != self.base:
                raise ValueError(f"Bases diferentes: {self.base} e {other.base}")
            return (self.ratio > other.ratio) - (self.ratio < other.ratio)
        exponent = Fraction(other)
        p, q = exponent.numerator, exponent.denominator
        a, b = self.ratio.numerator, self.ratio.denominator
        left = a**q
        right = b**q
        if p >= 0:
            right *= self.base**p
        else:
            left *= self.base ** (-p)
        return (left > right) - (left < right)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (LogValue, int, Fraction)) and not isinstance(other, bool):
            return self.compare(other) == 0
        return NotImplemented

    def __lt__(self, other: object) -> bool:
        if isinstance(other, (LogValue, int, Fraction)):
            return self.compare(other) < 0
        return NotImplemented

    def __le__(self, other: object) -> bool:
        if isinstance(other, (LogValue, int, Fraction)):
            return self.compare(other) <= 0
        return NotImplemented

    def __gt__(self, other: object) -> bool:
        if isinstance(other, (LogValue, int, Fraction)):
            return self.compare(other) > 0
        return NotImplemented

    def __ge__(self, other: object) -> bool:
        if isinstance(other, (LogValue, int, Fraction)):
            return self.compare(other) >= 0
        return NotImplemented

    def __hash__(self) -> int:
        exact = self.as_fraction()
        if exact is not None:
            return hash(exact)
        return hash((self.ratio, self.base))

    def as_fraction(self) -> Fraction | None:
        """Expoente racional p/q tal que base^(p/q) = ratio, se existir."""
        if self.ratio == 1:
            return Fraction(0)
        magnitude = self.ratio if self.ratio > 1 else 1 / self.ratio
        if magnitude.denominator != 1:
            return None
        guess = Fraction(math.log(magnitude.numerator) / math.log(self.base))
        guess = guess.limit_denominator(_MAX_DENOMINATOR)
        if guess <= 0 or magnitude.numerator ** guess.denominator != self.base**guess.numerator:
            return None
        return guess if self.ratio > 1 else -guess

    def __float__(self) -> float:
        return math.log(self.ratio.numerator / self.ratio.denominator) / math.log(self.base)

    def __str__(self) -> str:
        exact = self.as_fraction()
        if exact is not None:
            return str(exact)
        return f"log{self.base}({self.ratio})"

    def __repr__(self) -> str:
        return f"LogValue({self.ratio}, base={self.base})"
