"""
Hand-digitized reference shapes on triangulated integer grids
"""

import logging
from typing import Callable, Dict, Iterable, List, Optional, Tuple

from app.models.schemas import ShapeFixture
from app.services.complex_kernel import CWSpace, SpaceBuilder
from app.services.cycle_ribbon import cycle_service
from app.utils.errors import NotFound

logger = logging.getLogger(__name__)

# Short names used on the command line and for shipped documents
ALIASES: Dict[str, str] = {
    "fig1a": "triangle_fan3",
    "fig1b": "triangle_fan3_prime",
    "fig2": "two_cycles",
    "fig3a": "cycle_figure3a",
    "fig3b": "intersecting_cycles_3b",
    "fig4b": "ribbon_4b",
    "earrings": "hawaiian_earrings",
    "necklace": "hawaiian_necklace",
    "butterfly": "hawaiian_butterfly",
}


class GridSketch:
    """Draws on the unit grid; square (i, j) is split along its rising diagonal."""

    def __init__(self, builder: SpaceBuilder):
        self.builder = builder

    def v(self, i: int, j: int) -> int:
        return self.builder.point(i, j)

    def lower(self, i: int, j: int) -> int:
        return self.builder.triangle(self.v(i, j), self.v(i + 1, j), self.v(i + 1, j + 1))

    def upper(self, i: int, j: int) -> int:
        return self.builder.triangle(self.v(i, j), self.v(i + 1, j + 1), self.v(i, j + 1))

    def square(self, i: int, j: int) -> List[int]:
        return [self.lower(i, j), self.upper(i, j)]

    def block(
        self, i0: int, j0: int, i1: int, j1: int, skip: Iterable[Tuple[int, int]] = ()
    ) -> List[int]:
        """Triangles of squares i0 <= i < i1, j0 <= j < j1, row by row."""
        skipped = set(skip)
        triangles: List[int] = []
        for j in range(j0, j1):
            for i in range(i0, i1):
                if (i, j) not in skipped:
                    triangles.extend(self.square(i, j))
        return triangles

    def hexagon(self, i: int, j: int) -> List[int]:
        """The six triangles around grid vertex (i, j)."""
        return [
            self.lower(i, j), self.upper(i, j), self.lower(i - 1, j),
            self.upper(i - 1, j - 1), self.lower(i - 1, j - 1), self.upper(i, j - 1),
        ]

    def closure(self, cells: Iterable[int]) -> List[int]:
        return sorted(self.builder.closure_of(cells))


class FixtureFactory:
    """Builds every shipped reference space by name."""

    def __init__(self):
        """Register the fixture builders."""
        self._builders: Dict[str, Callable[[Optional[str]], ShapeFixture]] = {
            "triangle_fan3": self._triangle_fan3,
            "triangle_fan3_prime": self._triangle_fan3_prime,
            "two_cycles": self._two_cycles,
            "cycle_figure3a": self._single_cycle,
            "intersecting_cycles_3b": self._intersecting_cycles,
            "ribbon_4b": self._wide_ribbon,
            "hawaiian_earrings": self._hawaiian_earrings,
            "hawaiian_necklace": self._hawaiian_necklace,
            "hawaiian_butterfly": self._hawaiian_butterfly,
        }

    @property
    def names(self) -> List[str]:
        return list(self._builders)

    def canonical_name(self, name: str) -> str:
        name = ALIASES.get(name, name)
        if name not in self._builders:
            raise NotFound(f"unknown fixture '{name}'", f"known: {', '.join(self.names)}")
        return name

    def is_fixture(self, name: str) -> bool:
        return name in self._builders or name in ALIASES

    def build_fixture(self, name: str, space_name: Optional[str] = None) -> ShapeFixture:
        """Build a fixture space; `space_name` overrides the default space name."""
        name = self.canonical_name(name)
        fixture = self._builders[name](space_name or name)
        logger.info(f"Built fixture '{name}': {fixture.space!r}")
        return fixture

    # Three filled triangles sharing one vertex

    def _fan_space(self, space_name: str, suffix: str) -> Tuple[CWSpace, int]:
        builder = SpaceBuilder(space_name)
        grid = GridSketch(builder)
        grid.block(0, 0, 4, 3)

        e1, e2, e3 = grid.lower(2, 1), grid.lower(1, 1), grid.lower(1, 0)
        far = grid.upper(0, 2)
        v0 = grid.v(2, 1)
        builder.register(f"shE{suffix}", [e1, e2, e3], [v0])
        builder.register(f"E1{suffix}", [e1])
        builder.register(f"E2{suffix}", [e2])
        builder.register(f"E3{suffix}", [e3])
        builder.register(f"E23{suffix}", [e2, e3])
        builder.register(f"T{suffix}", [far])
        return builder.build(), v0

    def _triangle_fan3(self, space_name: str) -> ShapeFixture:
        space, v0 = self._fan_space(space_name, "")
        return ShapeFixture(
            name="triangle_fan3", space=space, declared_generators=[v0],
            primary="shE", labels={"v0": v0}, expected_filled_cycle=True,
        )

    def _triangle_fan3_prime(self, space_name: str) -> ShapeFixture:
        space, v0 = self._fan_space(space_name, "p")
        return ShapeFixture(
            name="triangle_fan3_prime", space=space, declared_generators=[v0],
            primary="shEp", labels={"v0p": v0}, expected_filled_cycle=True,
        )

    # A minimal filled cycle and a non-filled cycle

    def _two_cycles(self, space_name: str) -> ShapeFixture:
        builder = SpaceBuilder(space_name)
        grid = GridSketch(builder)
        grid.block(0, 0, 4, 2)

        filled = grid.square(0, 0)
        a, b, c = grid.v(2, 0), grid.v(3, 0), grid.v(3, 1)
        bare = [builder.edge(a, b), builder.edge(b, c), builder.edge(a, c)]
        bridge = builder.edge(grid.v(1, 0), a)
        v0 = grid.v(0, 0)
        builder.register("shE", filled + bare + [bridge], [v0])
        builder.register("cycE_min_filled", filled, [v0])
        builder.register("cycE_non_filled", bare)
        return ShapeFixture(
            name="two_cycles", space=builder.build(), declared_generators=[v0],
            primary="shE",
            labels={"v0": v0, "v1": grid.v(1, 0), "v5": grid.v(1, 1), "v3": grid.v(0, 1),
                    "v2": a, "v4": b, "v8": c},
            expected_filled_cycle=False,
        )

    # One filled cycle with generator v0

    def _single_cycle(self, space_name: str) -> ShapeFixture:
        builder = SpaceBuilder(space_name)
        grid = GridSketch(builder)
        grid.block(0, 0, 5, 4)

        v0 = grid.v(1, 1)
        builder.register("cycE", grid.block(1, 1, 4, 3), [v0])
        return ShapeFixture(
            name="cycle_figure3a", space=builder.build(), declared_generators=[v0],
            primary="cycE", labels={"v0": v0}, expected_filled_cycle=True,
        )

    # Two filled cycles meeting in one vertex

    def _intersecting_cycles(self, space_name: str) -> ShapeFixture:
        builder = SpaceBuilder(space_name)
        grid = GridSketch(builder)
        grid.block(0, 0, 5, 5)

        cyc_a = grid.block(0, 0, 3, 3)
        cyc_b = grid.block(3, 3, 5, 5)
        v0, v0p, v = grid.v(0, 0), grid.v(5, 5), grid.v(3, 3)
        builder.register("shE", cyc_a + cyc_b, [v0, v0p])
        builder.register("cycA", cyc_a, [v0])
        builder.register("cycB", cyc_b, [v0p])
        return ShapeFixture(
            name="intersecting_cycles_3b", space=builder.build(), declared_generators=[v0, v0p],
            primary="shE", labels={"v0": v0, "v0p": v0p, "v": v}, expected_filled_cycle=True,
        )

    # A ribbon between two nested filled cycles

    def _wide_ribbon(self, space_name: str) -> ShapeFixture:
        builder = SpaceBuilder(space_name)
        grid = GridSketch(builder)
        grid.block(0, 0, 6, 6)

        a0, b0 = grid.v(1, 1), grid.v(2, 2)
        builder.register("cycA", grid.block(1, 1, 5, 5), [a0])
        builder.register("cycB", grid.block(2, 2, 4, 4), [b0])
        space = builder.build()

        ribbon = self._ribbon(space, "cycA", "cycB", "rbE")
        space.register("rbE", ribbon.body.cells, [a0])
        return ShapeFixture(
            name="ribbon_4b", space=space, declared_generators=[a0],
            primary="rbE", labels={"a0": a0, "b0": b0}, expected_filled_cycle=False,
        )

    # Hawaiian earrings, necklace and butterfly

    def _earring_parts(
        self, grid: GridSketch, origin: Tuple[int, int], flip: bool
    ) -> Tuple[List[int], List[int], int]:
        """Disc with a corner notch and a hexagonal hole touching the notch corner."""
        ox, oy = origin
        if not flip:
            disc = grid.block(ox, oy, ox + 4, oy + 4, skip=[(ox + 3, oy + 3)])
            hole = grid.hexagon(ox + 2, oy + 2)
            touch = grid.v(ox + 3, oy + 3)
        else:
            disc = grid.block(ox, oy, ox + 4, oy + 4, skip=[(ox, oy)])
            hole = grid.hexagon(ox + 2, oy + 2)
            touch = grid.v(ox + 1, oy + 1)
        return disc, hole, touch

    def _ribbon(self, space: CWSpace, disc: str, hole: str, name: str):
        outer = cycle_service.filled_cycles(space, disc)[0]
        inner = cycle_service.filled_cycles(space, hole)[0]
        return cycle_service.make_ribbon(space, outer, inner, name)

    def _hawaiian_earrings(self, space_name: str) -> ShapeFixture:
        builder = SpaceBuilder(space_name)
        grid = GridSketch(builder)
        disc, hole, v0 = self._earring_parts(grid, (0, 0), flip=False)
        disc_p, hole_p, v0p = self._earring_parts(grid, (4, 4), flip=True)
        bridge = builder.edge(v0, v0p)

        builder.register("erE_disc", disc, [v0])
        builder.register("erE_hole", hole, [v0])
        builder.register("erEp_disc", disc_p, [v0p])
        builder.register("erEp_hole", hole_p, [v0p])
        space = builder.build()

        er_e = self._ribbon(space, "erE_disc", "erE_hole", "erE").body.cells
        er_ep = self._ribbon(space, "erEp_disc", "erEp_hole", "erEp").body.cells
        space.register("erE", er_e, [v0])
        space.register("erEp", er_ep, [v0p])
        space.register("erE_pair", er_e | er_ep | {bridge}, [v0, v0p])
        return ShapeFixture(
            name="hawaiian_earrings", space=space, declared_generators=[v0, v0p],
            primary="erE_pair", labels={"v0": v0, "v0p": v0p}, expected_filled_cycle=False,
        )

    def _hawaiian_necklace(self, space_name: str) -> ShapeFixture:
        builder = SpaceBuilder(space_name)
        grid = GridSketch(builder)
        grid.block(0, 0, 8, 4)

        disc = grid.block(0, 0, 8, 4, skip=[(1, 0), (6, 0), (6, 3)])
        hole = grid.block(2, 1, 6, 3)
        g, gp, v0p = grid.v(2, 1), grid.v(6, 3), grid.v(6, 1)
        builder.register("HnE_disc", disc, [g, gp, v0p])
        builder.register("HnE_hole", hole, [g, gp, v0p])
        space = builder.build()

        beads = self._ribbon(space, "HnE_disc", "HnE_hole", "HnE").body.cells
        space.register("HnE", beads, [g, gp, v0p])
        return ShapeFixture(
            name="hawaiian_necklace", space=space, declared_generators=[g, gp, v0p],
            primary="HnE", labels={"g": g, "gp": gp, "v0p": v0p}, expected_filled_cycle=True,
        )

    def _hawaiian_butterfly(self, space_name: str) -> ShapeFixture:
        builder = SpaceBuilder(space_name)
        grid = GridSketch(builder)
        grid.block(0, 0, 8, 8)

        left_disc, left_hole, v1 = self._earring_parts(grid, (0, 4), flip=False)
        right_disc, right_hole, v2 = self._earring_parts(grid, (4, 0), flip=True)
        v0 = grid.v(4, 4)
        builder.register("HbE_left_disc", left_disc, [v0, v1])
        builder.register("HbE_left_hole", left_hole, [v1])
        builder.register("HbE_right_disc", right_disc, [v0, v2])
        builder.register("HbE_right_hole", right_hole, [v2])
        space = builder.build()

        left = self._ribbon(space, "HbE_left_disc", "HbE_left_hole", "HbE_left").body.cells
        right = self._ribbon(space, "HbE_right_disc", "HbE_right_hole", "HbE_right").body.cells
        space.register("HbE_left", left, [v0, v1])
        space.register("HbE_right", right, [v0, v2])
        space.register("HbE", left | right, [v0, v1, v2])
        return ShapeFixture(
            name="hawaiian_butterfly", space=space, declared_generators=[v0, v1, v2],
            primary="HbE", labels={"v0": v0, "v1": v1, "v2": v2}, expected_filled_cycle=True,
        )


# Global fixture factory instance
fixture_factory = FixtureFactory()


def build_fixture(name: str, space_name: Optional[str] = None) -> ShapeFixture:
    return fixture_factory.build_fixture(name, space_name)


def grid_space(cols: int, rows: int, name: str = "grid") -> CWSpace:
    """Fully triangulated cols x rows grid; vertex (i, j) gets id j * (cols + 1) + i."""
    builder = SpaceBuilder(name)
    grid = GridSketch(builder)
    for j in range(rows + 1):
        for i in range(cols + 1):
            grid.v(i, j)
    grid.block(0, 0, cols, rows)
    return builder.build()
