"""
Filled 1-cycle extraction, the filled-cycle shape check and planar ribbons
"""

import logging
from typing import Dict, List, Optional, Set, Tuple

import networkx as nx

from app.models.schemas import CellComplex, Cycle, Ribbon
from app.services.complex_kernel import ComplexKernel, ComplexRef, CWSpace, complex_kernel
from app.utils import geometry
from app.utils.errors import MultiContour, NotNested

logger = logging.getLogger(__name__)


def canonical_loop(loop: List[int]) -> Tuple[int, ...]:
    """Rotate to the smallest vertex id and orient so the second id is the smaller neighbour."""
    start = loop.index(min(loop))
    rotated = loop[start:] + loop[:start]
    if len(rotated) > 2 and rotated[-1] < rotated[1]:
        rotated = [rotated[0]] + rotated[:0:-1]
    return tuple(rotated)


def split_walk(walk: List[int]) -> List[List[int]]:
    """Split a closed vertex walk into simple loops at repeated vertices."""
    loops: List[List[int]] = []
    stack: List[int] = []
    position: Dict[int, int] = {}
    for vertex in walk + walk[:1]:
        if vertex in position:
            i = position[vertex]
            loop = stack[i:]
            if len(loop) >= 3:
                loops.append(loop)
            for dropped in stack[i + 1:]:
                del position[dropped]
            del stack[i + 1:]
        else:
            position[vertex] = len(stack)
            stack.append(vertex)
    return loops


class CycleService:
    """Service for boundary cycles, filled cycles and ribbons."""

    def __init__(self, kernel: ComplexKernel = complex_kernel):
        """Initialize the cycle service on top of the complex kernel."""
        self.kernel = kernel

    def extract_cycles(self, space: CWSpace, A: ComplexRef) -> List[Cycle]:
        """All boundary loops of the 2-cells of A plus loops of its bare 1-skeleton."""
        A = self.kernel.resolve(space, A)
        closed = self.kernel.closure(space, A)

        loops: Set[Tuple[int, ...]] = set()
        for walk in self._face_walks(space, A):
            for loop in split_walk(walk):
                loops.add(canonical_loop(loop))

        incidence = self.kernel.edge_incidence(space, A)
        bare = nx.Graph()
        for edge in sorted(e for e, count in incidence.items() if count == 0):
            bare.add_edge(*sorted(space.cells[edge].vertices))
        for basis_loop in nx.cycle_basis(bare):
            loops.add(canonical_loop(list(basis_loop)))

        cycles: List[Cycle] = []
        for loop in sorted(loops, key=lambda lp: (min(lp), len(lp), lp)):
            cycle = self._make_cycle(space, closed, loop)
            if cycle is not None:
                cycles.append(cycle)
        logger.debug(f"Extracted {len(cycles)} cycles from '{A.name}'")
        return cycles

    def _face_walks(self, space: CWSpace, A: CellComplex) -> List[List[int]]:
        half_edges: Set[Tuple[int, int]] = set()
        for tri in space.cells_of_dim(A.cells, 2):
            a, b, c = space.cells[tri].vertices
            if geometry.orient(space.point(a), space.point(b), space.point(c)) < 0:
                b, c = c, b
            half_edges.update(((a, b), (b, c), (c, a)))

        boundary = sorted((u, w) for u, w in half_edges if (w, u) not in half_edges)
        outgoing: Dict[int, List[int]] = {}
        for u, w in boundary:
            outgoing.setdefault(u, []).append(w)

        walks: List[List[int]] = []
        unvisited = set(boundary)
        for start in boundary:
            if start not in unvisited:
                continue
            walk: List[int] = []
            current = start
            while True:
                unvisited.discard(current)
                u, w = current
                walk.append(u)
                here = space.point(w)
                back = space.point(u)
                reference = (back[0] - here[0], back[1] - here[1])

                def turn(x: int) -> object:
                    there = space.point(x)
                    return geometry.clockwise_turn(reference, (there[0] - here[0], there[1] - here[1]))

                current = (w, min(outgoing[w], key=turn))
                if current == start:
                    break
            walks.append(walk)
        return walks

    def _make_cycle(self, space: CWSpace, closed: CellComplex, loop: Tuple[int, ...]) -> Optional[Cycle]:
        edges: List[int] = []
        for i, u in enumerate(loop):
            edge = space.cell_for((u, loop[(i + 1) % len(loop)]))
            if edge is None:
                logger.warning(f"Loop {list(loop)} uses an unregistered edge; skipped")
                return None
            edges.append(edge)

        on_loop = set(edges) | {space.cell_for((v,)) for v in loop}
        polygon = [space.point(v) for v in loop]
        inside = [
            cid for cid in sorted(closed.cells - on_loop)
            if geometry.strictly_inside_polygon(geometry.centroid(space.coords(cid)), polygon)
        ]
        interior = space.complex_from_cells(inside, f"Int(cyc{list(loop)})")
        return Cycle(loop=loop, edges=tuple(edges), interior=interior, filled=bool(inside))

    def filled_cycles(self, space: CWSpace, A: ComplexRef) -> List[Cycle]:
        return [c for c in self.extract_cycles(space, A) if c.filled]

    def is_filled_cycle(self, space: CWSpace, cycle: Cycle) -> bool:
        return not cycle.interior.is_empty()

    def shape_closure_report(self, space: CWSpace, A: ComplexRef) -> Tuple[bool, str]:
        """Whether cl(A) is a filled 1-cycle, with a one-line diagnostic."""
        A = self.kernel.resolve(space, A)
        try:
            loop, closed = self.kernel.single_contour(space, A)
        except MultiContour as e:
            return False, f"MultiContour: {len(e.loops)} contour components"
        if not loop:
            return False, "empty contour"
        if not closed:
            return False, "contour is not a closed curve (odd-degree vertex or isolated vertex)"
        if self.kernel.interior(space, A).is_empty():
            return False, "empty interior"
        return True, f"one closed contour through {len(set(loop))} vertices"

    def shape_closure_is_filled_cycle(self, space: CWSpace, A: ComplexRef) -> bool:
        verdict, reason = self.shape_closure_report(space, A)
        if not verdict:
            logger.info(f"Shape closure is not a filled cycle: {reason}")
        return verdict

    def make_ribbon(self, space: CWSpace, outer: Cycle, inner: Cycle, name: str = "ribbon") -> Ribbon:
        """Cells between two nesting or touching filled cycles, both loops kept."""
        try:
            if not (outer.filled and inner.filled):
                raise NotNested("ribbon cycles must both be filled")
            if set(outer.loop) == set(inner.loop):
                raise NotNested("inner and outer loops coincide (degenerate annulus)")

            polygon = [space.point(v) for v in outer.loop]
            shared = set(outer.loop) & set(inner.loop)
            for v in inner.loop:
                if v not in shared and not geometry.strictly_inside_polygon(space.point(v), polygon):
                    raise NotNested(f"inner loop vertex {v} lies outside the outer loop")
            if not inner.interior.cells <= outer.interior.cells:
                raise NotNested("inner interior is not contained in the outer interior")

            outer_cells = set(outer.edges) | {space.cell_for((v,)) for v in outer.loop}
            body_cells = (outer_cells | outer.interior.cells) - inner.interior.cells
            body = space.complex_from_cells(body_cells, name)
            if self.kernel.interior(space, body).is_empty():
                raise NotNested("ribbon body has an empty interior")

            logger.info(f"Built ribbon '{name}' with {len(body_cells)} cells ({len(shared)} shared loop vertices)")
            return Ribbon(outer=outer, inner=inner, body=body)

        except NotNested as e:
            logger.error(f"Error building ribbon '{name}': {e}")
            raise


# Global cycle service instance
cycle_service = CycleService()
