"""Testes para a arvore e as instancias do TEP."""

import pytest

from tep_lab.config import LabSettings
from tep_lab.core.tree import (
    Func,
    Leaf,
    TepInstance,
    TreeShape,
    enumerate_instances,
    input_length,
    instance_count,
    instance_from_index,
    instance_index,
    iter_check_instances,
    non_thrifty_slots,
    perturb,
    query_of_slot,
    sample_instance,
    slot_of,
    thrifty_queries,
    validate_query,
)
from tep_lab.errors import BudgetExceededError, InvalidShapeError, MalformedQueryError


class TestTreeShape:
    def test_heap_layout(self) -> None:
        shape = TreeShape(3)
        assert shape.node_count == 7
        assert list(shape.leaves) == [4, 5, 6, 7]
        assert list(shape.internal_nodes) == [1, 2, 3]
        assert shape.children(2) == (4, 5)
        assert shape.parent(5) == 2
        assert shape.parent(1) is None

    def test_bottom_up_visits_children_first(self) -> None:
        order = list(TreeShape(3).bottom_up())
        assert order == [7, 6, 5, 4, 3, 2, 1]

    def test_sibling_and_side(self) -> None:
        shape = TreeShape(3)
        assert shape.sibling(4) == 5
        assert shape.sibling(7) == 6
        assert shape.is_left_child(6)
        assert not shape.is_left_child(7)
        assert not shape.is_left_child(1)

    @pytest.mark.parametrize("h", [1, 0, -3])
    def test_rejects_small_height(self, h: int) -> None:
        with pytest.raises(InvalidShapeError):
            TreeShape(h)

    def test_children_of_leaf_is_malformed(self) -> None:
        with pytest.raises(MalformedQueryError):
            TreeShape(2).children(3)


class TestInputLength:
    @pytest.mark.parametrize(
        "h, k, expected",
        [(2, 2, 6), (2, 3, 11), (3, 2, 16), (2, 4, 18), (4, 2, 36)],
    )
    def test_known_values(self, h: int, k: int, expected: int) -> None:
        assert input_length(h, k) == expected

    def test_instance_count(self) -> None:
        assert instance_count(2, 2) == 64
        assert instance_count(3, 2) == 65536


class TestEvaluate:
    def test_fix_a(self, fix_a: TepInstance) -> None:
        assert fix_a.m == 6
        assert fix_a.node_value(2) == 1
        assert fix_a.node_value(3) == 2
        assert fix_a.node_value(1) == 2

    def test_fix_b(self, fix_b: TepInstance) -> None:
        assert fix_b.m == 16
        assert fix_b.node_value(2) == 2
        assert fix_b.node_value(3) == 1
        assert fix_b.node_value(1) == 2

    def test_tables_round_trip_through_parts(self, fix_a: TepInstance) -> None:
        rebuilt = TepInstance.from_parts(fix_a.shape, 2, fix_a.leaf_values, fix_a.tables)
        assert rebuilt == fix_a

    def test_thrifty_queries(self, fix_a: TepInstance) -> None:
        assert thrifty_queries(fix_a) == {Leaf(2), Leaf(3), Func(1, 1, 2)}
        assert fix_a.is_thrifty(Func(1, 1, 2))
        assert not fix_a.is_thrifty(Func(1, 2, 2))

    def test_non_thrifty_slots(self, fix_a: TepInstance) -> None:
        slots = non_thrifty_slots(fix_a)
        assert [query_of_slot(fix_a.shape, 2, s) for s in slots] == [
            Func(1, 1, 1),
            Func(1, 2, 1),
            Func(1, 2, 2),
        ]


class TestPerturb:
    def test_thrifty_entry_changes_root(self, fix_a: TepInstance) -> None:
        assert perturb(fix_a, Func(1, 1, 2), 1).node_value(1) == 1

    def test_non_thrifty_entry_keeps_root(self, fix_a: TepInstance) -> None:
        assert perturb(fix_a, Func(1, 2, 2), 2).node_value(1) == 2

    def test_leaf_change(self, fix_a: TepInstance) -> None:
        assert perturb(fix_a, Leaf(2), 2).node_value(1) == 1

    def test_value_out_of_range(self, fix_a: TepInstance) -> None:
        with pytest.raises(InvalidShapeError):
            perturb(fix_a, Leaf(2), 3)

    def test_non_thrifty_slots_never_change_values(self, fix_b: TepInstance) -> None:
        for slot in non_thrifty_slots(fix_b):
            query = query_of_slot(fix_b.shape, 2, slot)
            changed = perturb(fix_b, query, 3 - fix_b.answer(query))
            assert changed.node_values == fix_b.node_values


class TestQueries:
    def test_slot_order(self) -> None:
        shape = TreeShape(2)
        assert slot_of(shape, 2, Leaf(2)) == 0
        assert slot_of(shape, 2, Leaf(3)) == 1
        assert slot_of(shape, 2, Func(1, 1, 1)) == 2
        assert slot_of(shape, 2, Func(1, 2, 2)) == 5

    def test_slot_round_trip(self) -> None:
        shape = TreeShape(3)
        for slot in range(input_length(3, 2)):
            assert slot_of(shape, 2, query_of_slot(shape, 2, slot)) == slot

    @pytest.mark.parametrize(
        "query",
        [Leaf(1), Leaf(4), Func(2, 1, 1), Func(1, 3, 1), Func(1, 1, 0)],
    )
    def test_malformed(self, query: Leaf | Func) -> None:
        with pytest.raises(MalformedQueryError):
            validate_query(TreeShape(2), 2, query)


class TestInstances:
    def test_rejects_wrong_length(self) -> None:
        with pytest.raises(InvalidShapeError):
            TepInstance(TreeShape(2), 2, (1, 1, 1))

    def test_rejects_value_out_of_range(self) -> None:
        with pytest.raises(InvalidShapeError):
            TepInstance(TreeShape(2), 2, (1, 1, 1, 1, 1, 3))

    def test_rejects_small_k(self) -> None:
        with pytest.raises(InvalidShapeError):
            TepInstance(TreeShape(2), 1, (1,) * 3)

    def test_missing_table(self) -> None:
        with pytest.raises(InvalidShapeError):
            TepInstance.from_parts(TreeShape(2), 2, [1, 2], {})

    def test_sample_is_deterministic(self) -> None:
        assert sample_instance(4, 2, 11) == sample_instance(4, 2, 11)

    def test_sample_length_for_k3(self) -> None:
        assert sample_instance(2, 3, 5).m == 11

    def test_index_round_trip(self, fix_b: TepInstance) -> None:
        index = instance_index(fix_b)
        assert instance_from_index(fix_b.shape, 2, index) == fix_b

    def test_enumeration_order_matches_index(self) -> None:
        instances = list(enumerate_instances(2, 2))
        assert len(instances) == 64
        assert [instance_index(i) for i in instances] == list(range(64))

    def test_enumeration_over_budget(self) -> None:
        with pytest.raises(BudgetExceededError) as exc_info:
            enumerate_instances(3, 2, LabSettings(enumeration_cap=1000))
        assert exc_info.value.limit == 1000
        assert exc_info.value.required == 65536


class TestCheckInstances:
    def test_exhaustive_mode(self) -> None:
        mode, instances = iter_check_instances(TreeShape(2), 2, LabSettings())
        assert mode == "exhaustive"
        assert len(list(instances)) == 64

    def test_sampled_mode(self) -> None:
        settings = LabSettings(enumeration_cap=10, sample_size=25)
        mode, instances = iter_check_instances(TreeShape(2), 2, settings)
        assert mode == "sampled"
        assert len(list(instances)) == 25

    def test_sampled_mode_is_reproducible(self) -> None:
        settings = LabSettings(enumeration_cap=10, sample_size=5, sample_seed=3)
        _, first = iter_check_instances(TreeShape(2), 3, settings)
        _, second = iter_check_instances(TreeShape(2), 3, settings)
        assert list(first) == list(second)
