"""
Finite planar CW spaces: construction, closure, interior, contour,
boundary region and CW-condition verification
"""

import logging
import threading
from fractions import Fraction
from itertools import combinations
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Set, Tuple, Union

import networkx as nx

from app.models.schemas import Cell, CellComplex, ContourReport, CWReport, Point2
from app.utils import geometry
from app.utils.errors import InvalidCell, MultiContour, NotFound, OverlapError

logger = logging.getLogger(__name__)

UNIVERSE = "K"

ComplexRef = Union[str, CellComplex]


class CWSpace:
    """A finite planar universe of cells with a registry of named complexes."""

    def __init__(self, name: str, vertices: Dict[int, Point2], cells: Dict[int, Cell]):
        """Index cells by realization and prepare the registry."""
        self.name = name
        self.vertices = dict(sorted(vertices.items()))
        self.cells = dict(sorted(cells.items()))
        self.complexes: Dict[str, CellComplex] = {}
        self.version = 0
        self._lock = threading.Lock()
        self._memo: Dict[tuple, object] = {}

        self._by_key: Dict[Tuple[int, ...], int] = {}
        for cell in self.cells.values():
            self._by_key.setdefault(cell.key, cell.id)
        self._by_point = {p.as_tuple(): vid for vid, p in self.vertices.items()}
        self._cofaces: Optional[Dict[int, Set[int]]] = None

        self.universe = CellComplex(
            name=UNIVERSE, cells=frozenset(self.cells), space_name=name, origin="derived"
        )

    def __repr__(self) -> str:
        return f"CWSpace({self.name!r}, {len(self.vertices)} vertices, {len(self.cells)} cells)"

    # Registry

    def register(
        self,
        name: str,
        cells: Iterable[int],
        declared_generators: Sequence[int] = (),
        origin: str = "declared",
    ) -> CellComplex:
        """Register a named complex; cells and generators must exist."""
        cell_set = frozenset(cells)
        unknown = sorted(c for c in cell_set if c not in self.cells)
        if unknown:
            raise NotFound(f"complex '{name}' references unknown cells", str(unknown[:5]))
        missing = [v for v in declared_generators if v not in self.vertices]
        if missing:
            raise NotFound(f"complex '{name}' declares unknown generator vertices", str(missing))
        if name == UNIVERSE:
            raise InvalidCell(f"'{UNIVERSE}' is reserved for the universe")

        complex_ = CellComplex(
            name=name,
            cells=cell_set,
            space_name=self.name,
            declared_generators=tuple(declared_generators),
            origin=origin,
        )
        with self._lock:
            self.complexes[name] = complex_
            self.version += 1
            self._memo.clear()
        logger.debug(f"Registered complex '{name}' ({len(cell_set)} cells) in space '{self.name}'")
        return complex_

    def get(self, name: str) -> CellComplex:
        if name == UNIVERSE:
            return self.universe
        try:
            return self.complexes[name]
        except KeyError:
            raise NotFound(f"unknown complex '{name}' in space '{self.name}'")

    def declared(self) -> List[CellComplex]:
        return [c for c in self.complexes.values() if c.origin == "declared"]

    def complex_from_cells(self, cells: Iterable[int], name: str = "adhoc") -> CellComplex:
        return CellComplex(name=name, cells=frozenset(cells), space_name=self.name)

    @property
    def generators(self) -> List[int]:
        """Union of the generators declared by registered complexes."""
        pool: Set[int] = set()
        for complex_ in self.declared():
            pool.update(complex_.declared_generators)
        return sorted(pool)

    def memo(self, key: tuple, compute: Callable[[], object]) -> object:
        """Cache a derived value until the registry changes."""
        with self._lock:
            if key in self._memo:
                return self._memo[key]
        value = compute()
        with self._lock:
            self._memo[key] = value
        return value

    # Geometry and incidence

    def point(self, vertex_id: int) -> Tuple[Fraction, Fraction]:
        return self.vertices[vertex_id].as_tuple()

    def vertex_at(self, x, y) -> int:
        try:
            return self._by_point[(Fraction(x), Fraction(y))]
        except KeyError:
            raise NotFound(f"no vertex at ({x}, {y}) in space '{self.name}'")

    def cell_for(self, vertex_ids: Iterable[int]) -> Optional[int]:
        return self._by_key.get(tuple(sorted(vertex_ids)))

    def face_keys(self, cell_id: int) -> List[Tuple[int, ...]]:
        """Realization keys of all proper faces of a cell."""
        vertices = self.cells[cell_id].vertices
        keys: List[Tuple[int, ...]] = []
        for size in range(len(vertices) - 1, 0, -1):
            keys.extend(tuple(sorted(sub)) for sub in combinations(vertices, size))
        return keys

    def faces(self, cell_id: int) -> List[int]:
        """Registered proper faces of a cell; unregistered faces are skipped."""
        found = (self._by_key.get(key) for key in self.face_keys(cell_id))
        return sorted(c for c in found if c is not None)

    def cofaces(self, cell_id: int) -> Set[int]:
        if self._cofaces is None:
            index: Dict[int, Set[int]] = {c: set() for c in self.cells}
            for cid in self.cells:
                for face in self.faces(cid):
                    index[face].add(cid)
            self._cofaces = index
        return self._cofaces[cell_id]

    def coords(self, cell_id: int) -> List[Tuple[Fraction, Fraction]]:
        return [self.point(v) for v in self.cells[cell_id].vertices]

    def cells_of_dim(self, cells: Iterable[int], dim: int) -> List[int]:
        return sorted(c for c in cells if self.cells[c].dim == dim)


class SpaceBuilder:
    """Single-writer construction phase for a CWSpace."""

    def __init__(self, name: str):
        self.name = name
        self.vertices: Dict[int, Point2] = {}
        self.cells: Dict[int, Cell] = {}
        self._by_point: Dict[Tuple[Fraction, Fraction], int] = {}
        self._by_key: Dict[Tuple[int, ...], int] = {}
        self._registrations: List[Tuple[str, List[int], Tuple[int, ...]]] = []

    def add_vertex(self, vertex_id: int, x, y) -> int:
        point = Point2(x=x, y=y)
        if vertex_id in self.vertices:
            raise InvalidCell(f"duplicate vertex id {vertex_id}")
        self.vertices[vertex_id] = point
        self._by_point.setdefault(point.as_tuple(), vertex_id)
        return vertex_id

    def add_cell(self, cell_id: int, dim: int, vertex_ids: Sequence[int]) -> int:
        if cell_id in self.cells:
            raise InvalidCell(f"duplicate cell id {cell_id}")
        missing = [v for v in vertex_ids if v not in self.vertices]
        if missing:
            raise NotFound(f"cell {cell_id} references unknown vertices", str(missing))
        try:
            cell = Cell(id=cell_id, dim=dim, vertices=tuple(vertex_ids))
        except ValueError as e:
            raise InvalidCell(f"invalid cell {cell_id}", str(e))
        if dim == 2 and geometry.orient(*(self.vertices[v].as_tuple() for v in vertex_ids)) == 0:
            raise InvalidCell(f"triangle {cell_id} is degenerate (collinear vertices)")
        self.cells[cell_id] = cell
        self._by_key.setdefault(cell.key, cell_id)
        return cell_id

    def _next_vertex_id(self) -> int:
        return max(self.vertices, default=-1) + 1

    def _next_cell_id(self) -> int:
        return max(self.cells, default=-1) + 1

    def point(self, x, y) -> int:
        """Vertex at (x, y) with its 0-cell, created on first use."""
        key = (Fraction(x), Fraction(y))
        if key in self._by_point:
            return self._by_point[key]
        vertex_id = self.add_vertex(self._next_vertex_id(), x, y)
        self.add_cell(self._next_cell_id(), 0, (vertex_id,))
        return vertex_id

    def edge(self, u: int, v: int) -> int:
        key = tuple(sorted((u, v)))
        if key in self._by_key:
            return self._by_key[key]
        return self.add_cell(self._next_cell_id(), 1, (u, v))

    def triangle(self, a: int, b: int, c: int) -> int:
        """Filled triangle with its edges, created on first use."""
        key = tuple(sorted((a, b, c)))
        if key in self._by_key:
            return self._by_key[key]
        for u, v in ((a, b), (b, c), (a, c)):
            self.edge(u, v)
        return self.add_cell(self._next_cell_id(), 2, (a, b, c))

    def closure_of(self, cells: Iterable[int]) -> Set[int]:
        closed: Set[int] = set()
        for cid in cells:
            closed.add(cid)
            vertices = self.cells[cid].vertices
            for size in range(1, len(vertices)):
                for sub in combinations(vertices, size):
                    face = self._by_key.get(tuple(sorted(sub)))
                    if face is not None:
                        closed.add(face)
        return closed

    def register(self, name: str, cells: Iterable[int], declared_generators: Sequence[int] = ()) -> None:
        self._registrations.append((name, sorted(set(cells)), tuple(declared_generators)))

    def build(self, check_planarity: bool = True) -> CWSpace:
        """Validate planarity, then freeze cells into a CWSpace."""
        try:
            if check_planarity:
                self._check_planarity()
            space = CWSpace(self.name, self.vertices, self.cells)
            for name, cells, generators in self._registrations:
                space.register(name, cells, generators)
            logger.info(f"Built {space!r} with {len(space.complexes)} complexes")
            return space
        except Exception as e:
            logger.error(f"Error building space '{self.name}': {e}")
            raise

    def _check_planarity(self) -> None:
        points = {vid: p.as_tuple() for vid, p in self.vertices.items()}
        segments: List[Tuple[int, int]] = []
        seen_segments: Set[Tuple[int, int]] = set()
        triangles: List[Tuple[int, int, int]] = []
        for cell in self.cells.values():
            if cell.dim == 1:
                pairs = [tuple(sorted(cell.vertices))]
            elif cell.dim == 2:
                a, b, c = cell.vertices
                triangles.append((a, b, c))
                pairs = [tuple(sorted(p)) for p in ((a, b), (b, c), (a, c))]
            else:
                continue
            for pair in pairs:
                if pair not in seen_segments:
                    seen_segments.add(pair)
                    segments.append(pair)

        def box(ids: Sequence[int]) -> Tuple[Fraction, Fraction, Fraction, Fraction]:
            xs = [points[i][0] for i in ids]
            ys = [points[i][1] for i in ids]
            return (min(xs), min(ys), max(xs), max(ys))

        def boxes_meet(p, q) -> bool:
            return p[0] <= q[2] and q[0] <= p[2] and p[1] <= q[3] and q[1] <= p[3]

        segment_boxes = [box(s) for s in segments]
        for i, j in combinations(range(len(segments)), 2):
            if not boxes_meet(segment_boxes[i], segment_boxes[j]):
                continue
            (a, b), (c, d) = segments[i], segments[j]
            if geometry.segments_conflict(points[a], points[b], points[c], points[d]):
                raise OverlapError(f"edges {segments[i]} and {segments[j]} overlap improperly")

        for vid, p in points.items():
            for k, (a, b) in enumerate(segments):
                sb = segment_boxes[k]
                if sb[0] <= p[0] <= sb[2] and sb[1] <= p[1] <= sb[3]:
                    if geometry.strictly_between(p, points[a], points[b]):
                        raise OverlapError(f"vertex {vid} lies inside edge {(a, b)}")

        triangle_boxes = [box(t) for t in triangles]
        for vid, p in points.items():
            for k, t in enumerate(triangles):
                tb = triangle_boxes[k]
                if vid in t or not (tb[0] <= p[0] <= tb[2] and tb[1] <= p[1] <= tb[3]):
                    continue
                if geometry.strictly_inside_triangle(p, *(points[v] for v in t)):
                    raise OverlapError(f"vertex {vid} lies inside triangle {t}")

        for i, j in combinations(range(len(triangles)), 2):
            if not boxes_meet(triangle_boxes[i], triangle_boxes[j]):
                continue
            s, t = triangles[i], triangles[j]
            if set(s) == set(t):
                continue
            cs = geometry.centroid([points[v] for v in s])
            ct = geometry.centroid([points[v] for v in t])
            if geometry.strictly_inside_triangle(cs, *(points[v] for v in t)) or \
                    geometry.strictly_inside_triangle(ct, *(points[v] for v in s)):
                raise OverlapError(f"triangles {s} and {t} overlap")


class ComplexKernel:
    """Service for closure, interior, contour and boundary-region queries."""

    def resolve(self, space: CWSpace, A: ComplexRef) -> CellComplex:
        """Registered complex by name, or an ad-hoc complex checked against the space."""
        if isinstance(A, str):
            return space.get(A)
        unknown = [c for c in A.cells if c not in space.cells]
        if unknown:
            raise NotFound(f"complex '{A.name}' has cells outside space '{space.name}'", str(sorted(unknown)[:5]))
        return A

    def closure(self, space: CWSpace, A: ComplexRef) -> CellComplex:
        """A plus every registered face of its cells."""
        A = self.resolve(space, A)
        closed: Set[int] = set(A.cells)
        for cid in A.cells:
            closed.update(space.faces(cid))
        return space.complex_from_cells(closed, f"cl({A.name})")

    def edge_incidence(self, space: CWSpace, A: ComplexRef) -> Dict[int, int]:
        """For every edge of cl(A), the number of 2-cells of A it bounds."""
        A = self.resolve(space, A)
        closed = self.closure(space, A)
        incidence = {cid: 0 for cid in space.cells_of_dim(closed.cells, 1)}
        for tri in space.cells_of_dim(A.cells, 2):
            for face in space.faces(tri):
                if face in incidence:
                    incidence[face] += 1
        return incidence

    def contour(self, space: CWSpace, A: ComplexRef) -> CellComplex:
        """Edges of cl(A) bounding at most one 2-cell of A, their vertices and isolated vertices."""
        A = self.resolve(space, A)
        closed = self.closure(space, A)
        incidence = self.edge_incidence(space, A)
        edges = [e for e, count in incidence.items() if count <= 1]
        cells: Set[int] = set(edges)
        for e in edges:
            cells.update(space.faces(e))

        covered: Set[int] = set()
        for e in incidence:
            covered.update(space.faces(e))
        for v in space.cells_of_dim(closed.cells, 0):
            if v not in covered:
                cells.add(v)
        return space.complex_from_cells(cells, f"bdy({A.name})")

    def contour_report(self, space: CWSpace, A: ComplexRef) -> ContourReport:
        """Contour plus one closed walk per connected component."""
        A = self.resolve(space, A)
        bdy = self.contour(space, A)
        graph = nx.Graph()
        for cid in sorted(bdy.cells):
            cell = space.cells[cid]
            if cell.dim == 0:
                graph.add_node(cell.vertices[0])
            elif cell.dim == 1:
                graph.add_edge(*sorted(cell.vertices))

        loops: List[List[int]] = []
        closed: List[bool] = []
        components = sorted(nx.connected_components(graph), key=min)
        for component in components:
            sub = graph.subgraph(component)
            is_closed = sub.number_of_edges() > 0 and all(d % 2 == 0 for _, d in sub.degree())
            if is_closed:
                walk = [u for u, _ in nx.eulerian_circuit(sub, source=min(component))]
            else:
                walk = sorted(component)
            loops.append(walk)
            closed.append(is_closed)
        if len(loops) > 1:
            logger.debug(f"Contour of '{A.name}' splits into {len(loops)} components")
        return ContourReport(contour=bdy, loops=loops, closed=closed)

    def single_contour(self, space: CWSpace, A: ComplexRef) -> Tuple[List[int], bool]:
        """The only contour walk of A and whether it closes; ([], False) for an empty contour."""
        A = self.resolve(space, A)
        report = self.contour_report(space, A)
        if report.multi:
            raise MultiContour(f"contour of '{A.name}' has {len(report.loops)} components", report.loops)
        if not report.loops:
            return [], False
        return report.loops[0], report.closed[0]

    def interior(self, space: CWSpace, A: ComplexRef) -> CellComplex:
        A = self.resolve(space, A)
        cells = self.closure(space, A).cells - self.contour(space, A).cells
        return space.complex_from_cells(cells, f"Int({A.name})")

    def boundary_region(self, space: CWSpace, A: ComplexRef) -> CellComplex:
        """Every cell of the universe outside cl(A)."""
        A = self.resolve(space, A)
        cells = space.universe.cells - self.closure(space, A).cells
        return space.complex_from_cells(cells, f"bd({A.name})")

    def components(self, space: CWSpace, A: ComplexRef) -> List[CellComplex]:
        """Face-connected pieces of A, ordered by smallest cell id."""
        A = self.resolve(space, A)
        graph = nx.Graph()
        graph.add_nodes_from(A.cells)
        for cid in A.cells:
            graph.add_edges_from((cid, face) for face in space.faces(cid) if face in A.cells)
        pieces = sorted(nx.connected_components(graph), key=min)
        return [space.complex_from_cells(piece, f"{A.name}[{i}]") for i, piece in enumerate(pieces)]

    def verify_cw_conditions(self, space: CWSpace) -> CWReport:
        """Check containment, intersection and distinct realizations."""
        notes: List[str] = []
        violations: List[str] = []

        for cid in space.cells:
            for key in space.face_keys(cid):
                if space.cell_for(key) is None:
                    violations.append(f"cell {cid} is missing face {list(key)}")
        containment = not violations

        existing = {c.cells: name for name, c in space.complexes.items()}
        registered = list(space.complexes.values())
        for first, second in combinations(registered, 2):
            shared = first.cells & second.cells
            if not shared or shared in existing:
                continue
            name = f"{first.name}&{second.name}"
            space.register(name, shared, origin="intersection")
            existing[shared] = name
            notes.append(f"registered intersection {name} ({len(shared)} cells)")
            logger.warning(f"Intersection condition: registered missing complex '{name}'")

        realizations = [(c.dim, c.key) for c in space.cells.values()]
        points = [p.as_tuple() for p in space.vertices.values()]
        hausdorff = len(set(realizations)) == len(realizations) and len(set(points)) == len(points)
        if not hausdorff:
            violations.append("two cells or vertices share a realization")

        return CWReport(
            containment=containment,
            intersection=True,
            hausdorff=hausdorff,
            notes=notes,
            violations=violations,
        )

    def restrict(self, space: CWSpace, A: ComplexRef, name: Optional[str] = None) -> CWSpace:
        """Sub-space whose universe is cl(A), registry intersected into it."""
        A = self.resolve(space, A)
        keep = self.closure(space, A).cells
        vertex_ids = {v for cid in keep for v in space.cells[cid].vertices}
        sub = CWSpace(
            name or f"{space.name}|{A.name}",
            {v: space.vertices[v] for v in vertex_ids},
            {cid: space.cells[cid] for cid in keep},
        )
        for complex_ in space.declared():
            cells = complex_.cells & keep
            if cells:
                generators = [g for g in complex_.declared_generators if g in vertex_ids]
                sub.register(complex_.name, cells, generators)
        return sub

    def disjoint_union(self, spaces: Sequence[CWSpace], name: str, gap: int = 2) -> CWSpace:
        """Place spaces side by side; complexes are renamed '<space>.<complex>'."""
        builder_vertices: Dict[int, Point2] = {}
        builder_cells: Dict[int, Cell] = {}
        registrations: List[Tuple[str, List[int], List[int]]] = []
        x_cursor: Optional[Fraction] = None
        vertex_offset = 0
        cell_offset = 0

        for part in spaces:
            xs = [p.x for p in part.vertices.values()] or [Fraction(0)]
            shift = Fraction(0) if x_cursor is None else x_cursor + gap - min(xs)
            for vid, p in part.vertices.items():
                builder_vertices[vid + vertex_offset] = Point2(x=p.x + shift, y=p.y)
            for cid, cell in part.cells.items():
                builder_cells[cid + cell_offset] = Cell(
                    id=cid + cell_offset,
                    dim=cell.dim,
                    vertices=tuple(v + vertex_offset for v in cell.vertices),
                )
            for complex_ in part.declared():
                registrations.append((
                    f"{part.name}.{complex_.name}",
                    [c + cell_offset for c in complex_.cells],
                    [g + vertex_offset for g in complex_.declared_generators],
                ))
            x_cursor = max(xs) + shift
            vertex_offset += max(part.vertices, default=-1) + 1
            cell_offset += max(part.cells, default=-1) + 1

        union = CWSpace(name, builder_vertices, builder_cells)
        for complex_name, cells, generators in registrations:
            union.register(complex_name, cells, generators)
        logger.info(f"Juxtaposed {len(spaces)} spaces into {union!r}")
        return union


# Global kernel instance
complex_kernel = ComplexKernel()
