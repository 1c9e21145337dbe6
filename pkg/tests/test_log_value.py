"""Testes para valores exatos na escala log_k."""

from fractions import Fraction

import pytest

from tep_lab.core.log_value import LogValue


class TestArithmetic:
    def test_addition_multiplies_ratios(self) -> None:
        total = LogValue(Fraction(2), 4) + LogValue(Fraction(2), 4)
        assert total == 1

    def test_subtraction(self) -> None:
        assert LogValue(Fraction(8), 2) - LogValue(Fraction(2), 2) == 2

    def test_int_coercion(self) -> None:
        value = 1 - LogValue(Fraction(2), 2)
        assert value == 0
        assert 0 + LogValue(Fraction(3), 3) == 1

    def test_negation(self) -> None:
        assert -LogValue(Fraction(9), 3) == -2

    def test_mismatched_bases(self) -> None:
        with pytest.raises(ValueError):
            LogValue(Fraction(2), 2) + LogValue(Fraction(3), 3)

    def test_rejects_non_positive_ratio(self) -> None:
        with pytest.raises(ValueError):
            LogValue(Fraction(0), 2)


class TestComparison:
    def test_against_fraction(self) -> None:
        half = LogValue(Fraction(2), 4)
        assert half == Fraction(1, 2)
        assert half < 1
        assert half > Fraction(1, 3)

    def test_irrational_value(self) -> None:
        value = LogValue(Fraction(3), 2)
        assert value > 1
        assert value < 2
        assert value.compare(Fraction(3, 2)) > 0
        assert value.as_fraction() is None

    def test_compare_log_values(self) -> None:
        assert LogValue(Fraction(4, 3), 2) < LogValue(Fraction(2), 2)

    def test_hash_matches_equal_values(self) -> None:
        assert hash(LogValue(Fraction(4), 2)) == hash(LogValue(Fraction(16), 4))


class TestFormatting:
    @pytest.mark.parametrize(
        "ratio, base, expected",
        [
            (Fraction(1), 2, "0"),
            (Fraction(4), 2, "2"),
            (Fraction(2), 4, "1/2"),
            (Fraction(1, 8), 2, "-3"),
        ],
    )
    def test_rational_exponent(self, ratio: Fraction, base: int, expected: str) -> None:
        assert str(LogValue(ratio, base)) == expected

    def test_irrational_prints_ratio(self) -> None:
        assert str(LogValue(Fraction(4, 3), 4)) == "log4(4/3)"

    def test_float(self) -> None:
        assert float(LogValue(Fraction(8), 2)) == pytest.approx(3.0)
