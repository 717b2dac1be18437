"""
Tests for maps, dpc checks, fixed and amiable sets and the fixed-set property checks
"""

import random

import pytest

from app.models.schemas import DpcMap, ProbeFunction
from app.services.complex_kernel import complex_kernel
from app.services.fixed_sets import BOUNDARY_COMPLEMENT, IDENTITY, fixed_set_service
from app.services.fixtures import ALIASES, build_fixture, grid_space
from app.services.proximity import proximity_service
from app.utils.config import settings
from app.utils.errors import EmptyBoundary, InvalidArgument, NotFound, NotTotal, ScalarRequired

COLLAPSE = DpcMap(
    name="collapse",
    kind="table",
    table={"shE": "E1", "E1": "E1", "E2": "E23", "E3": "E3", "E23": "E23", "T": "T"},
)


@pytest.fixture(scope="module")
def jewellery():
    """Earrings, necklace and butterfly side by side in one universe."""
    parts = [build_fixture(name).space for name in ("earrings", "necklace", "butterfly")]
    return complex_kernel.disjoint_union(parts, "jewellery")


class TestApply:

    def test_boundary_complement_is_closure(self, fan):
        image = fixed_set_service.apply(BOUNDARY_COMPLEMENT, fan.space, "shE")
        assert image.cells == complex_kernel.closure(fan.space, "shE").cells
        assert len(image) == 19

    def test_identity(self, fan):
        assert fixed_set_service.apply(IDENTITY, fan.space, "E1") == fan.space.get("E1")

    def test_universe_maps_to_itself(self, fan):
        assert fixed_set_service.apply(BOUNDARY_COMPLEMENT, fan.space, "K").cells == fan.space.universe.cells

    def test_table_without_entry(self, fan):
        partial = DpcMap(name="partial", kind="table", table={"shE": "E1"})
        with pytest.raises(NotTotal):
            fixed_set_service.apply(partial, fan.space, "T")

    def test_boundary_complement_is_idempotent(self, fan):
        for complex_ in fan.space.declared():
            once = fixed_set_service.apply(BOUNDARY_COMPLEMENT, fan.space, complex_)
            twice = fixed_set_service.apply(BOUNDARY_COMPLEMENT, fan.space, once)
            assert once.cells == twice.cells


class TestDpc:

    @pytest.mark.parametrize("dpc_map", [BOUNDARY_COMPLEMENT, IDENTITY])
    def test_both_modes_hold(self, fan, dpc_map):
        assert fixed_set_service.is_dpc(dpc_map, fan.space, "beta0", "existential")
        assert fixed_set_service.is_dpc(dpc_map, fan.space, "beta0", "universal")

    def test_collapse_breaks_universal(self, fan):
        existential = fixed_set_service.check_dpc(COLLAPSE, fan.space, "beta0", "existential")
        universal = fixed_set_service.check_dpc(COLLAPSE, fan.space, "beta0", "universal")
        assert existential.holds
        assert not universal.holds
        assert universal.witness == ("E1", "E2")

    def test_no_near_pairs(self, lone_triangle):
        existential = fixed_set_service.check_dpc(IDENTITY, lone_triangle, "beta0", "existential")
        universal = fixed_set_service.check_dpc(IDENTITY, lone_triangle, "beta0", "universal")
        assert existential.pairs_checked == 0
        assert not existential.holds
        assert universal.holds

    def test_unknown_mode(self, fan):
        with pytest.raises(InvalidArgument):
            fixed_set_service.check_dpc(IDENTITY, fan.space, "beta0", "sometimes")


class TestFixedAndAmiable:

    def test_boundary_complement_fixes_the_fan(self, fan):
        assert fixed_set_service.descriptive_fixed(BOUNDARY_COMPLEMENT, fan.space, "shE", "beta0")
        assert fixed_set_service.amiable(BOUNDARY_COMPLEMENT, fan.space, "shE", "beta0")

    def test_collapse_changes_description(self, fan):
        assert not fixed_set_service.descriptive_fixed(COLLAPSE, fan.space, "shE", "beta0")

    def test_identity_fixes_everything(self, ribbon):
        for complex_ in ribbon.space.declared():
            assert fixed_set_service.descriptive_fixed(IDENTITY, ribbon.space, complex_, "beta_alpha")

    def test_ribbon_is_amiable(self, ribbon):
        report = fixed_set_service.amiable_pair(BOUNDARY_COMPLEMENT, ribbon.space, "rbE", "rbE", "beta0")
        assert report.holds
        assert report.witness.space_name == ribbon.space.name

    def test_report_lines(self, fan):
        report = fixed_set_service.fixed_set_report(BOUNDARY_COMPLEMENT, fan.space, "shE", "beta0")
        lines = report.lines()
        assert lines[:5] == [
            "subject=shE",
            "dpc_existential=true",
            "dpc_universal=true",
            "descriptive_fixed=true",
            "amiable=true",
        ]
        assert lines[5].startswith("witness=triangle_fan3:")

    @pytest.mark.parametrize("alias", sorted(ALIASES))
    def test_fixed_implies_amiable(self, alias):
        space = build_fixture(alias).space
        for complex_ in space.declared():
            if fixed_set_service.descriptive_fixed(BOUNDARY_COMPLEMENT, space, complex_, "beta0"):
                assert fixed_set_service.amiable(BOUNDARY_COMPLEMENT, space, complex_, "beta0")

    def test_earrings_and_necklace_are_not_amiable(self, jewellery):
        report = fixed_set_service.amiable_pair(
            BOUNDARY_COMPLEMENT, jewellery, "hawaiian_earrings.erE", "hawaiian_necklace.HnE", "beta_alpha"
        )
        assert not report.holds
        assert report.witness is None


class TestAlmostAmiable:

    def test_earrings_and_necklace(self, jewellery):
        report = fixed_set_service.almost_amiable_report(
            jewellery, "hawaiian_earrings.erE_pair", "hawaiian_necklace.HnE", BOUNDARY_COMPLEMENT, "beta_alpha", 1
        )
        assert report.holds
        assert report.render() == "true (|2-3|=1)"

    def test_tighter_threshold(self, jewellery):
        report = fixed_set_service.almost_amiable_report(
            jewellery, "hawaiian_earrings.erE_pair", "hawaiian_necklace.HnE", BOUNDARY_COMPLEMENT, "beta_alpha", 0.5
        )
        assert not report.holds
        assert report.render() == "false (|2-3|=1)"

    @pytest.mark.parametrize("th", [0.5, 1, 100])
    def test_necklace_and_butterfly(self, jewellery, th):
        report = fixed_set_service.almost_amiable_report(
            jewellery, "hawaiian_necklace.HnE", "hawaiian_butterfly.HbE", BOUNDARY_COMPLEMENT, "beta_alpha", th
        )
        assert report.render() == "true (|3-3|=0)"

    def test_symmetric(self, jewellery):
        forward = fixed_set_service.almost_amiable(
            jewellery, "hawaiian_earrings.erE_pair", "hawaiian_butterfly.HbE", IDENTITY, "beta_alpha", 1
        )
        backward = fixed_set_service.almost_amiable(
            jewellery, "hawaiian_butterfly.HbE", "hawaiian_earrings.erE_pair", IDENTITY, "beta_alpha", 1
        )
        assert forward == backward

    @pytest.mark.parametrize("th", [0, -1])
    def test_threshold_must_be_positive(self, fan, th):
        with pytest.raises(InvalidArgument):
            fixed_set_service.almost_amiable_report(fan.space, "shE", "T", IDENTITY, "beta0", th)

    def test_vector_probe(self, fan):
        pair = ProbeFunction(name="pair", extractor="custom", arity=2, set_fn=lambda space, A: (1, 2))
        with pytest.raises(ScalarRequired):
            fixed_set_service.almost_amiable_report(fan.space, "shE", "T", IDENTITY, pair, 1)

    def test_probe_returning_a_vector(self, fan):
        sneaky = ProbeFunction(name="sneaky", extractor="custom", set_fn=lambda space, A: (1, 2))
        with pytest.raises(ScalarRequired):
            fixed_set_service.almost_amiable_report(fan.space, "shE", "T", IDENTITY, sneaky, 1)


class TestFixedSetProperties:

    @pytest.mark.parametrize("alias", sorted(ALIASES))
    def test_jordan_partition(self, alias):
        fixture = build_fixture(alias)
        assert fixed_set_service.jordan_partition_check(fixture.space, fixture.primary)
        assert fixed_set_service.jordan_partition_check(fixture.space, "K")

    @pytest.mark.parametrize("alias", sorted(ALIASES))
    def test_jordan_partition_of_random_complexes(self, alias):
        space = build_fixture(alias).space
        rng = random.Random(settings.seed)
        for _ in range(settings.random_complexes):
            A = proximity_service.sample_complex(space, rng, 3 * settings.sample_max_cells)
            assert fixed_set_service.jordan_partition_check(space, A), sorted(A.cells)

    @pytest.mark.parametrize("probe", ["beta0", "beta_alpha"])
    @pytest.mark.parametrize("alias", sorted(ALIASES))
    def test_fixed_cell_complex(self, alias, probe):
        assert fixed_set_service.fixed_cell_complex_check(build_fixture(alias).space, probe)

    def test_single_shape_registry(self, lone_triangle):
        assert fixed_set_service.fixed_cell_complex_check(lone_triangle, "beta0")

    def test_collapse_moves_the_closure(self, fan):
        assert not fixed_set_service.fixed_cell_complex_check(fan.space, "beta0", COLLAPSE)

    def test_empty_registry(self):
        with pytest.raises(InvalidArgument):
            fixed_set_service.fixed_cell_complex_check(grid_space(1, 1), "beta0")

    @pytest.mark.parametrize("alias, name", [("fig4b", "rbE"), ("necklace", "HnE"), ("butterfly", "HbE")])
    def test_wide_ribbons(self, alias, name):
        space = build_fixture(alias).space
        for probe in ("beta0", "beta_alpha"):
            assert fixed_set_service.ribbon_fixed_set_check(space, name, probe)

    def test_shape_boundary_of_fan(self, fan):
        report = fixed_set_service.shape_boundary_fixed_report(fan.space, "shE")
        assert (report.fixed, report.amiable) == (True, True)
        assert report.discrepancy
        assert set(report.discrepancy) <= complex_kernel.contour(fan.space, "shE").cells

    def test_shape_boundary_of_ribbon(self, ribbon):
        assert fixed_set_service.shape_boundary_fixed_check(ribbon.space, "rbE") == (True, True)

    def test_shape_boundary_of_universe(self, fan):
        with pytest.raises(EmptyBoundary):
            fixed_set_service.shape_boundary_fixed_check(fan.space, "K")


class TestResolveMap:

    def test_builtin(self, fan):
        assert fixed_set_service.resolve_map(fan.space, "boundary_complement") is BOUNDARY_COMPLEMENT

    def test_declared_table(self, fan):
        assert fixed_set_service.resolve_map(fan.space, "collapse", [COLLAPSE]) is COLLAPSE

    def test_unknown(self, fan):
        with pytest.raises(NotFound):
            fixed_set_service.resolve_map(fan.space, "rotate")
