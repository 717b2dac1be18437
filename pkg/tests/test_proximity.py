"""
Tests for spatial and descriptive proximity and the axiom checkers
"""

import random

import pytest

from app.models.schemas import ElementRef, ProbeFunction
from app.services.complex_kernel import SpaceBuilder
from app.services.fixtures import build_fixture, grid_space
from app.services.proximity import ProximityService, proximity_service
from app.utils.errors import InvalidArgument, NotFound, SpaceMismatch


def strip_space(name: str, shapes):
    """One-row strip of 9 squares with the given {name: [(i, upper), ...]} registered."""
    space = grid_space(9, 1, name)

    def v(i, j):
        return j * 10 + i

    for shape, triangles in shapes.items():
        cells = []
        for i, upper in triangles:
            if upper:
                cells.append(space.cell_for((v(i, 0), v(i + 1, 1), v(i, 1))))
            else:
                cells.append(space.cell_for((v(i, 0), v(i + 1, 0), v(i + 1, 1))))
        space.register(shape, cells)
    return space


@pytest.fixture
def two_and_three():
    """Two triangles and three triangles sharing only a vertex."""
    return strip_space("touching", {
        "two": [(0, False), (0, True)],
        "three": [(1, False), (2, False), (2, True)],
    })


@pytest.fixture
def closure_registry():
    return strip_space("registry", {
        "shE": [(0, False), (0, True), (1, False)],
        "shEp": [(3, False), (3, True), (4, False)],
        "T": [(7, True)],
    })


class TestNear:

    def test_shared_vertex(self, fan):
        assert proximity_service.near(fan.space, "E1", "E23")

    def test_empty_is_far(self, fan):
        empty = fan.space.complex_from_cells([], "empty")
        assert not proximity_service.near(fan.space, "shE", empty)
        assert not proximity_service.near(fan.space, empty, "shE")

    def test_opposite_corners(self, fan):
        assert not proximity_service.near(fan.space, "T", "E1")

    def test_unknown_complex(self, fan):
        with pytest.raises(NotFound):
            proximity_service.near(fan.space, "shE", "nope")


class TestDescribe:

    def test_beta0_of_fan(self, fan):
        description = proximity_service.describe(fan.space, "shE", "beta0")
        assert description.values == (3.0,)
        assert description.render() == "(3)"

    def test_empty_is_zero(self, fan):
        empty = fan.space.complex_from_cells([], "empty")
        assert proximity_service.describe(fan.space, empty, "beta0").values == (0.0,)

    def test_vertex_count_of_triangle(self, lone_triangle):
        assert proximity_service.describe(lone_triangle, "tri", "vertex_count").values == (3.0,)

    def test_contour_length_is_real(self, lone_triangle):
        description = proximity_service.describe(lone_triangle, "tri", "contour_length")
        assert description.integral == (False,)
        assert description.values[0] == pytest.approx(4 + 8 ** 0.5)

    def test_unknown_extractor(self, fan):
        with pytest.raises(NotFound):
            proximity_service.describe(fan.space, "shE", "colour")

    def test_set_level_custom_probe(self, fan):
        probe = ProbeFunction(name="pair", extractor="custom", arity=2, set_fn=lambda space, A: (len(A.cells), 0.5))
        description = proximity_service.describe(fan.space, "E1", probe)
        assert description.values == (1.0, 0.5)
        assert description.integral == (True, False)

    def test_element_only_probe_has_no_set_description(self, fan):
        probe = ProbeFunction(name="dims", extractor="custom", element_fn=lambda space, cid: (space.cells[cid].dim,))
        with pytest.raises(InvalidArgument):
            proximity_service.describe(fan.space, "E1", probe)

    def test_element_carries_the_description_of_its_complex(self, fan):
        e1 = next(iter(fan.space.get("E1").cells))
        assert proximity_service.element_description(fan.space, "E1", e1, "beta0").render() == "(1)"
        assert proximity_service.element_description(fan.space, "shE", e1, "beta0").render() == "(3)"

    def test_element_outside_the_complex(self, fan):
        t = next(iter(fan.space.get("T").cells))
        with pytest.raises(NotFound):
            proximity_service.element_description(fan.space, "E1", t, "beta0")

    def test_custom_element_extractor_is_per_cell(self, fan):
        probe = ProbeFunction(name="dims", extractor="custom", element_fn=lambda space, cid: (space.cells[cid].dim,))
        e1 = next(iter(fan.space.get("E1").cells))
        assert proximity_service.element_description(fan.space, "shE", e1, probe).values == (2.0,)


class TestDescriptiveNearness:

    def test_fan_against_its_copy(self, fan, fan_prime):
        assert proximity_service.dnear(
            fan.space, "shE", "shEp", "beta0", same_space=False, other_space=fan_prime.space
        )
        shared = proximity_service.descriptive_intersection(
            fan.space, "shE", "shEp", "beta0", same_space=False, other_space=fan_prime.space
        )
        assert {ref.space_name for ref in shared} == {"triangle_fan3", "triangle_fan3_prime"}

    def test_two_against_three_triangles(self, two_and_three):
        assert proximity_service.near(two_and_three, "two", "three")
        assert not proximity_service.dnear(two_and_three, "two", "three", "beta0")
        assert proximity_service.descriptive_intersection(two_and_three, "two", "three", "beta0") == set()

    def test_far_apart_with_equal_descriptions(self, closure_registry):
        assert not proximity_service.near(closure_registry, "shE", "shEp")
        assert proximity_service.dnear(closure_registry, "shE", "shEp", "beta0")

    def test_equal_shapes_in_different_places(self, fan):
        assert not proximity_service.near(fan.space, "T", "E1")
        assert proximity_service.dnear(fan.space, "E1", "T", "beta0")

    def test_unequal_shapes(self, fan):
        assert not proximity_service.dnear(fan.space, "E23", "shE", "beta0")
        assert proximity_service.descriptive_intersection(fan.space, "E23", "shE", "beta0") == set()

    def test_equal_descriptions_are_near(self):
        for name in ("fig1a", "fig3a", "fig4b", "earrings"):
            space = build_fixture(name).space
            shapes = space.declared()
            for A in shapes:
                for B in shapes:
                    for probe in ("beta0", "cell_count"):
                        if proximity_service.describe(space, A, probe) == proximity_service.describe(space, B, probe):
                            assert proximity_service.dnear(space, A, B, probe), (name, A.name, B.name, probe)

    def test_reflexive(self, fan):
        for name in ("shE", "E1", "T"):
            assert proximity_service.dnear(fan.space, name, name, "beta_alpha")

    def test_self_intersection_is_the_complex(self, fan):
        shared = proximity_service.descriptive_intersection(fan.space, "shE", "shE", "beta0")
        assert shared == {ElementRef(space_name=fan.space.name, cell_id=c) for c in fan.space.get("shE").cells}

    def test_against_empty(self, fan):
        empty = fan.space.complex_from_cells([], "empty")
        assert proximity_service.descriptive_intersection(fan.space, "shE", empty, "beta0") == set()
        assert not proximity_service.dnear(fan.space, empty, "shE", "beta0")

    def test_same_space_with_two_universes(self, fan, fan_prime):
        with pytest.raises(SpaceMismatch):
            proximity_service.dnear(fan.space, "shE", "shE", "beta0", same_space=True, other_space=fan_prime.space)

    def test_cross_space_needs_two_universes(self, fan):
        with pytest.raises(SpaceMismatch):
            proximity_service.dnear(fan.space, "shE", "shE", "beta0", same_space=False)
        twin = build_fixture("triangle_fan3").space
        with pytest.raises(SpaceMismatch):
            proximity_service.dnear(fan.space, "shE", "shE", "beta0", same_space=False, other_space=twin)

    def test_tolerance_applies_to_real_features(self, lone_triangle):
        loose = ProximityService(tolerance=0.5)
        probe = ProbeFunction(
            name="jitter", extractor="custom",
            element_fn=lambda space, cid: (float(space.cells[cid].dim) + cid / 100,),
        )
        strict = proximity_service
        edges = lone_triangle.cells_of_dim(lone_triangle.cells, 1)
        first = lone_triangle.complex_from_cells(edges[:1], "first")
        second = lone_triangle.complex_from_cells(edges[1:2], "second")
        assert loose.dnear(lone_triangle, first, second, probe)
        assert not strict.dnear(lone_triangle, first, second, probe)


class TestDescriptiveClosure:

    def test_registry_of_one(self, lone_triangle):
        assert [c.name for c in proximity_service.descriptive_closure(lone_triangle, "tri", "beta0")] == ["tri"]

    def test_equal_descriptions_only(self, closure_registry):
        closure = proximity_service.descriptive_closure(closure_registry, "shE", "beta0")
        assert [c.name for c in closure] == ["shE", "shEp"]

    def test_shapes_with_one_triangle(self, fan):
        closure = proximity_service.descriptive_closure(fan.space, "T", "beta0")
        assert [c.name for c in closure] == ["E1", "E2", "E3", "T"]

    def test_empty(self, closure_registry):
        empty = closure_registry.complex_from_cells([], "empty")
        assert proximity_service.descriptive_closure(closure_registry, empty, "beta0") == []


class TestAxioms:

    def test_closure_overlap_passes(self, fan):
        report = proximity_service.check_cech_axioms(fan.space, trials=300, seed=7)
        assert report.passed
        assert [r.axiom for r in report.results] == ["P.0", "P.1", "P.2", "P.3"]
        assert report.result("P.2").line() == "P.2 pass (300 trials)"

    def test_asymmetric_relation_fails_symmetry(self, fan):
        def lower_first(space, A, B):
            return bool(A.cells) and bool(B.cells) and min(A.cells) <= min(B.cells)

        report = proximity_service.check_cech_axioms(fan.space, relation=lower_first, trials=300, seed=7)
        assert report.result("P.0").passed
        symmetry = report.result("P.1")
        assert not symmetry.passed
        assert symmetry.line().startswith("P.1 FAIL witness=<[")

    def test_descriptive_axioms_on_earrings(self, earrings):
        report = proximity_service.check_descriptive_axioms(earrings.space, "beta0", trials=1000, seed=7)
        assert report.passed
        assert report.config.probe.name == "beta0"
        assert report.result("dP.2-converse").passed

    def test_non_deterministic_probe_breaks_converse(self):
        builder = SpaceBuilder("segment")
        builder.register("seg", [builder.edge(builder.point(0, 0), builder.point(1, 0))])
        space = builder.build()
        rng = random.Random(1)
        noise = ProbeFunction(name="noise", extractor="custom", element_fn=lambda space, cid: (rng.randint(0, 1),))
        report = proximity_service.check_descriptive_axioms(space, noise, trials=500, seed=7)
        assert not report.result("dP.2-converse").passed

    def test_seeded_runs_repeat(self, fan):
        first = proximity_service.check_descriptive_axioms(fan.space, "beta_alpha", trials=100, seed=3)
        second = proximity_service.check_descriptive_axioms(fan.space, "beta_alpha", trials=100, seed=3)
        assert first == second

    def test_zero_trials(self, fan):
        with pytest.raises(InvalidArgument):
            proximity_service.check_cech_axioms(fan.space, trials=0)
