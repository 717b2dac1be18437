"""
Tests for cycle extraction, the filled-cycle shape check and ribbons
"""

import pytest

from app.services.complex_kernel import complex_kernel
from app.services.cycle_ribbon import canonical_loop, cycle_service, split_walk
from app.services.fixed_sets import fixed_set_service
from app.services.fixtures import ALIASES, build_fixture
from app.utils.errors import NotNested


def test_canonical_loop_rotation_and_orientation():
    assert canonical_loop([5, 3, 9, 1, 7]) == (1, 7, 5, 3, 9)
    assert canonical_loop([4, 2, 8]) == (2, 4, 8)


def test_split_walk_at_pinch_vertex():
    assert split_walk([0, 1, 2, 0, 3, 4]) == [[0, 1, 2], [0, 3, 4]]


class TestExtractCycles:

    def test_single_triangle(self, lone_triangle):
        cycles = cycle_service.extract_cycles(lone_triangle, "tri")
        assert len(cycles) == 1
        assert cycles[0].filled
        assert cycles[0].interior.cells == lone_triangle.get("tri").cells

    def test_ten_vertex_loop(self, single_cycle):
        cycles = cycle_service.extract_cycles(single_cycle.space, "cycE")
        assert [len(c) for c in cycles] == [10]
        assert cycles[0].filled
        assert single_cycle.labels["v0"] in cycles[0].loop

    def test_filled_and_non_filled(self, figure2):
        space = figure2.space
        (minimal,) = cycle_service.extract_cycles(space, "cycE_min_filled")
        (bare,) = cycle_service.extract_cycles(space, "cycE_non_filled")
        assert minimal.filled and len(minimal) == 4
        assert not bare.filled
        assert set(bare.loop) == {figure2.labels[k] for k in ("v2", "v4", "v8")}
        assert cycle_service.is_filled_cycle(space, minimal)
        assert not cycle_service.is_filled_cycle(space, bare)

    def test_mixed_shape_keeps_both(self, figure2):
        cycles = cycle_service.extract_cycles(figure2.space, "shE")
        assert sorted(c.filled for c in cycles) == [False, True]

    def test_fan_splits_at_shared_vertex(self, fan):
        cycles = cycle_service.filled_cycles(fan.space, "shE")
        assert [len(c) for c in cycles] == [3, 3, 3]
        assert all(fan.labels["v0"] in c.loop for c in cycles)

    def test_intersecting_cycles(self, intersecting_cycles):
        cycles = cycle_service.filled_cycles(intersecting_cycles.space, "shE")
        assert sorted(len(c) for c in cycles) == [8, 12]
        shared = set(cycles[0].loop) & set(cycles[1].loop)
        assert shared == {intersecting_cycles.labels["v"]}

    def test_deterministic_order(self, intersecting_cycles):
        first = cycle_service.extract_cycles(intersecting_cycles.space, "shE")
        second = cycle_service.extract_cycles(intersecting_cycles.space, "shE")
        assert [c.loop for c in first] == [c.loop for c in second]
        assert [min(c.loop) for c in first] == sorted(min(c.loop) for c in first)


@pytest.mark.parametrize("alias", sorted(ALIASES))
def test_shape_closure_agrees_with_figure_reading(alias):
    fixture = build_fixture(alias)
    verdict = cycle_service.shape_closure_is_filled_cycle(fixture.space, fixture.primary)
    assert verdict == fixture.expected_filled_cycle


def test_shape_closure_reasons(figure2, ribbon):
    verdict, reason = cycle_service.shape_closure_report(figure2.space, "shE")
    assert not verdict and "not a closed curve" in reason
    verdict, reason = cycle_service.shape_closure_report(ribbon.space, "rbE")
    assert not verdict and reason.startswith("MultiContour")
    verdict, reason = cycle_service.shape_closure_report(figure2.space, "cycE_min_filled")
    assert verdict and reason == "one closed contour through 4 vertices"


class TestRibbons:

    @pytest.fixture
    def nested(self, ribbon):
        outer = cycle_service.filled_cycles(ribbon.space, "cycA")[0]
        inner = cycle_service.filled_cycles(ribbon.space, "cycB")[0]
        return ribbon.space, outer, inner

    def test_body_keeps_both_loops(self, nested):
        space, outer, inner = nested
        rb = cycle_service.make_ribbon(space, outer, inner, "rb")
        assert len(rb.body) == 96
        for cycle in (outer, inner):
            assert set(cycle.edges) <= rb.body.cells
        assert not rb.body.cells & inner.interior.cells

    def test_body_partitions_the_universe(self, nested):
        space, outer, inner = nested
        rb = cycle_service.make_ribbon(space, outer, inner, "rb")
        assert fixed_set_service.jordan_partition_check(space, rb.body)
        region = complex_kernel.boundary_region(space, rb.body)
        assert len(rb.body) + len(region) == len(space.universe)

    def test_swapped_cycles_rejected(self, nested):
        space, outer, inner = nested
        with pytest.raises(NotNested):
            cycle_service.make_ribbon(space, inner, outer)

    def test_same_loop_rejected(self, nested):
        space, outer, _ = nested
        with pytest.raises(NotNested):
            cycle_service.make_ribbon(space, outer, outer)

    def test_side_by_side_cycles_rejected(self, intersecting_cycles):
        space = intersecting_cycles.space
        a = cycle_service.filled_cycles(space, "cycA")[0]
        b = cycle_service.filled_cycles(space, "cycB")[0]
        with pytest.raises(NotNested):
            cycle_service.make_ribbon(space, a, b)

    def test_non_filled_cycle_rejected(self, figure2):
        space = figure2.space
        (bare,) = cycle_service.extract_cycles(space, "cycE_non_filled")
        (minimal,) = cycle_service.extract_cycles(space, "cycE_min_filled")
        with pytest.raises(NotNested):
            cycle_service.make_ribbon(space, minimal, bare)

    def test_touching_loops_make_a_wide_ribbon(self, earrings):
        space = earrings.space
        contour = complex_kernel.contour_report(space, "erE")
        assert not contour.multi
        assert contour.loops[0].count(earrings.labels["v0"]) == 2
