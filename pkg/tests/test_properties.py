"""
Testes baseados em propriedades para instancias, slots e codificacoes.
Utiliza hypothesis para gerar entradas e verificar invariantes.
"""

import pytest

from tep_lab.analyzers.read_once_pebbling import lehmer_code, lehmer_decode
from tep_lab.core.log_value import LogValue
from tep_lab.core.tree import (
    TreeShape,
    evaluate,
    input_length,
    instance_count,
    instance_from_index,
    instance_index,
    non_thrifty_slots,
    perturb,
    query_of_slot,
    sample_instance,
    slot_of,
)
from tep_lab.utils.performance import index_batches

try:
    from hypothesis import given, settings
    from hypothesis import strategies as st

    HAS_HYPOTHESIS = True
except ImportError:
    HAS_HYPOTHESIS = False

pytestmark = pytest.mark.skipif(not HAS_HYPOTHESIS, reason="hypothesis nao disponivel")


if HAS_HYPOTHESIS:

    def shapes():
        """Pares (h, k) pequenos o bastante para instancias explicitas."""
        return st.tuples(st.integers(min_value=2, max_value=4), st.integers(2, 4))

    class TestInstanceProperties:
        @given(st.integers(min_value=0, max_value=instance_count(2, 2) - 1))
        def test_index_round_trip(self, index: int) -> None:
            instance = instance_from_index(TreeShape(2), 2, index)
            assert instance_index(instance) == index

        @given(shapes(), st.integers(min_value=0, max_value=2**32))
        @settings(max_examples=50)
        def test_sample_has_full_length(self, shape: tuple[int, int], seed: int) -> None:
            h, k = shape
            instance = sample_instance(h, k, seed)
            assert instance.m == input_length(h, k)
            assert all(1 <= value <= k for value in instance.values)

        @given(shapes(), st.integers(min_value=0, max_value=2**32), st.data())
        @settings(max_examples=50)
        def test_non_thrifty_entries_do_not_change_values(
            self, shape: tuple[int, int], seed: int, data: st.DataObject
        ) -> None:
            h, k = shape
            instance = sample_instance(h, k, seed)
            slot = data.draw(st.sampled_from(non_thrifty_slots(instance)))
            value = data.draw(st.integers(min_value=1, max_value=k))
            query = query_of_slot(instance.shape, k, slot)
            changed = perturb(instance, query, value)
            assert evaluate(changed).as_dict() == evaluate(instance).as_dict()

        @given(shapes(), st.data())
        def test_slot_round_trip(self, shape: tuple[int, int], data: st.DataObject) -> None:
            h, k = shape
            slot = data.draw(st.integers(min_value=0, max_value=input_length(h, k) - 1))
            assert slot_of(TreeShape(h), k, query_of_slot(TreeShape(h), k, slot)) == slot

    class TestEncodingProperties:
        @given(st.permutations(list(range(1, 7))))
        def test_lehmer_round_trip(self, permutation: list[int]) -> None:
            code = lehmer_code(permutation)
            assert 0 <= code < 720
            assert lehmer_decode(code, permutation) == permutation

        @given(st.integers(min_value=-6, max_value=6), st.integers(min_value=2, max_value=5))
        def test_exponent_is_exact(self, exponent: int, base: int) -> None:
            assert LogValue.from_exponent(exponent, base) == exponent

        @given(st.integers(min_value=0, max_value=500), st.integers(min_value=0, max_value=20))
        def test_batches_cover_range(self, total: int, count: int) -> None:
            batches = index_batches(total, count)
            covered = [i for start, stop in batches for i in range(start, stop)]
            assert covered == list(range(total))
