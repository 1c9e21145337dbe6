"""Testes para utilitarios de performance."""

import pytest

from tep_lab.utils.performance import PerformanceTracker, StageTiming, index_batches


class TestPerformanceTracker:
    def test_track_stage(self) -> None:
        tracker = PerformanceTracker()
        with tracker.track("census", item_count=64) as stage:
            sum(range(1000))
        assert stage.items == 64
        assert stage.duration_ms >= 0
        summary = tracker.get_summary()
        assert summary["slowest_stage"] == "census"
        assert summary["stages"][0]["stage"] == "census"
        assert summary["stages"][0]["items"] == 64

    def test_items_known_at_the_end(self) -> None:
        tracker = PerformanceTracker()
        with tracker.track("search") as stage:
            stage.items = 12
        assert tracker.get_summary()["stages"][0]["items"] == 12

    def test_records_on_error(self) -> None:
        tracker = PerformanceTracker()
        with pytest.raises(RuntimeError):
            with tracker.track("search"):
                raise RuntimeError("falha")
        assert [s["stage"] for s in tracker.get_summary()["stages"]] == ["search"]

    def test_total_time(self) -> None:
        tracker = PerformanceTracker()
        with tracker.track("op1"):
            pass
        with tracker.track("op2", item_count=3):
            pass
        summary = tracker.get_summary()
        assert [s["stage"] for s in summary["stages"]] == ["op1", "op2"]
        assert summary["total_time_ms"] == tracker.get_total_time()

    def test_empty_summary(self) -> None:
        assert PerformanceTracker().get_summary() == {"total_time_ms": 0, "stages": []}


class TestStageTiming:
    def test_throughput(self) -> None:
        assert StageTiming("census", items=64, duration_ms=32.0).throughput == 2000.0

    @pytest.mark.parametrize("items, duration", [(0, 10.0), (5, 0.0)])
    def test_throughput_without_data(self, items: int, duration: float) -> None:
        assert StageTiming("x", items, duration).throughput == 0.0


class TestIndexBatches:
    @pytest.mark.parametrize(
        "total, count, expected",
        [
            (10, 3, [(0, 4), (4, 8), (8, 10)]),
            (64, 4, [(0, 16), (16, 32), (32, 48), (48, 64)]),
            (3, 10, [(0, 1), (1, 2), (2, 3)]),
            (5, 0, [(0, 5)]),
            (0, 4, []),
        ],
    )
    def test_batches(self, total: int, count: int, expected: list[tuple[int, int]]) -> None:
        assert index_batches(total, count) == expected
