"""
Spatial (closure-overlap) and descriptive proximity, probe functions,
descriptive intersection and closure, and seeded axiom checkers
"""

import logging
import random
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Set, Tuple, Union

from app.models.schemas import (
    AxiomReport,
    AxiomResult,
    CellComplex,
    Description,
    ElementRef,
    ProbeFunction,
    ProximityConfig,
)
from app.services.complex_kernel import ComplexRef, CWSpace, complex_kernel
from app.services.cycle_ribbon import cycle_service
from app.utils import geometry
from app.utils.config import settings
from app.utils.errors import InvalidArgument, NotFound, SpaceMismatch

logger = logging.getLogger(__name__)

ProbeRef = Union[str, ProbeFunction]
Relation = Callable[[CWSpace, CellComplex, CellComplex], bool]


def _beta0(space: CWSpace, A: CellComplex) -> float:
    return len(space.cells_of_dim(A.cells, 2))


def _beta_alpha(space: CWSpace, A: CellComplex) -> float:
    if not A.cells:
        return 0
    on_cycles: Set[int] = set()
    for cycle in cycle_service.filled_cycles(space, A):
        on_cycles.update(cycle.loop)
    return len([g for g in space.generators if g in on_cycles])


def _cell_count(space: CWSpace, A: CellComplex) -> float:
    return len(A.cells)


def _vertex_count(space: CWSpace, A: CellComplex) -> float:
    return len({v for c in A.cells for v in space.cells[c].vertices})


def _contour_length(space: CWSpace, A: CellComplex) -> float:
    if not A.cells:
        return 0.0
    bdy = complex_kernel.contour(space, A)
    return sum(
        geometry.polygon_length(space.coords(e)) / 2
        for e in space.cells_of_dim(bdy.cells, 1)
    )


# extractor id -> (feature function, integral)
EXTRACTORS: Dict[str, Tuple[Callable[[CWSpace, CellComplex], float], bool]] = {
    "beta0": (_beta0, True),
    "beta_alpha": (_beta_alpha, True),
    "cell_count": (_cell_count, True),
    "vertex_count": (_vertex_count, True),
    "contour_length": (_contour_length, False),
}


class ProximityService:
    """Service for Cech and descriptive nearness over a space's complexes."""

    def __init__(self, tolerance: float = settings.real_tolerance):
        """Initialize with the real-component comparison tolerance."""
        self.tolerance = tolerance

    # Probes and descriptions

    def probe(self, probe: ProbeRef) -> ProbeFunction:
        if isinstance(probe, ProbeFunction):
            return probe
        if probe not in EXTRACTORS:
            raise NotFound(f"unknown probe extractor '{probe}'", f"known: {', '.join(EXTRACTORS)}")
        return ProbeFunction(name=probe, extractor=probe, arity=1)

    def describe(self, space: CWSpace, A: ComplexRef, probe: ProbeRef) -> Description:
        """Set-level feature vector of A; the zero vector for the empty complex."""
        probe = self.probe(probe)
        A = complex_kernel.resolve(space, A)
        if probe.set_fn is not None:
            values = tuple(probe.set_fn(space, A))
            return Description(values=tuple(float(v) for v in values), integral=tuple(isinstance(v, int) for v in values))
        if probe.is_custom:
            raise InvalidArgument(f"probe '{probe.name}' has no set-level extractor")
        feature, integral = EXTRACTORS[probe.extractor]
        if not A.cells:
            return Description(values=(0.0,), integral=(integral,))
        value = space.memo(("describe", probe.extractor, A.cells), lambda: float(feature(space, A)))
        return Description(values=(value,), integral=(integral,))

    def _custom_element(self, space: CWSpace, cell_id: int, probe: ProbeFunction) -> Description:
        values = tuple(probe.element_fn(space, cell_id))
        return Description(values=tuple(float(v) for v in values), integral=tuple(isinstance(v, int) for v in values))

    def element_description(self, space: CWSpace, A: ComplexRef, cell_id: int, probe: ProbeRef) -> Description:
        """Description of one element of A; without an element extractor every element carries Phi(A)."""
        probe = self.probe(probe)
        A = complex_kernel.resolve(space, A)
        if cell_id not in A.cells:
            raise NotFound(f"cell {cell_id} is not an element of '{A.name}'")
        if probe.element_fn is not None:
            return self._custom_element(space, cell_id, probe)
        return self.describe(space, A, probe)

    def _descriptions(self, space: CWSpace, A: CellComplex, probe: ProbeFunction) -> Dict[int, Description]:
        if probe.element_fn is not None:
            return {cid: self._custom_element(space, cid, probe) for cid in sorted(A.cells)}
        if not A.cells:
            return {}
        description = self.describe(space, A, probe)
        return {cid: description for cid in sorted(A.cells)}

    def _matching(self, left: Iterable[Description], right: Iterable[Description]) -> List[Description]:
        """Descriptions on the left that match some description on the right."""
        right = list(dict.fromkeys(right))
        exact = {d.values for d in right if all(d.integral)}
        matched = []
        for d in dict.fromkeys(left):
            if all(d.integral) and d.values in exact:
                matched.append(d)
            elif not all(d.integral) and any(d.matches(other, self.tolerance) for other in right):
                matched.append(d)
        return matched

    def _sides(
        self, space: CWSpace, A: ComplexRef, B: ComplexRef, same_space: bool, other_space: Optional[CWSpace]
    ) -> Tuple[CWSpace, CellComplex, CellComplex]:
        if same_space:
            if other_space is not None and other_space is not space:
                raise SpaceMismatch("same_space=True but two different spaces were given")
            other = space
            for side in (A, B):
                if isinstance(side, CellComplex) and side.space_name and side.space_name != space.name:
                    raise SpaceMismatch(f"complex '{side.name}' lives in '{side.space_name}', not '{space.name}'")
        else:
            if other_space is None:
                raise SpaceMismatch("cross-space comparison needs the second space")
            if other_space is space or other_space.name == space.name:
                raise SpaceMismatch("cross-space comparison needs two distinct universes")
            other = other_space
        return other, complex_kernel.resolve(space, A), complex_kernel.resolve(other, B)

    # Relations

    def near(self, space: CWSpace, A: ComplexRef, B: ComplexRef) -> bool:
        """Closure overlap: cl(A) and cl(B) share a cell."""
        A = complex_kernel.resolve(space, A)
        B = complex_kernel.resolve(space, B)
        if not A.cells or not B.cells:
            return False
        return bool(complex_kernel.closure(space, A).cells & complex_kernel.closure(space, B).cells)

    def descriptive_intersection(
        self,
        space: CWSpace,
        A: ComplexRef,
        B: ComplexRef,
        probe: ProbeRef,
        same_space: bool = True,
        other_space: Optional[CWSpace] = None,
    ) -> Set[ElementRef]:
        """Elements of A and B whose descriptions lie in both description sets."""
        probe = self.probe(probe)
        other, A, B = self._sides(space, A, B, same_space, other_space)
        left = self._descriptions(space, A, probe)
        right = self._descriptions(other, B, probe)

        shared = self._matching(left.values(), right.values()) + self._matching(right.values(), left.values())
        shared_set = list(dict.fromkeys(shared))
        # distinct space names keep the two sides disjoint
        result = {
            ElementRef(space_name=space.name, cell_id=cid)
            for cid, d in left.items() if self._matching([d], shared_set)
        }
        result.update(
            ElementRef(space_name=other.name, cell_id=cid)
            for cid, d in right.items() if self._matching([d], shared_set)
        )
        logger.debug(f"Descriptive intersection of '{A.name}' and '{B.name}': {len(result)} elements")
        return result

    def dnear(
        self,
        space: CWSpace,
        A: ComplexRef,
        B: ComplexRef,
        probe: ProbeRef,
        same_space: bool = True,
        other_space: Optional[CWSpace] = None,
    ) -> bool:
        """Descriptive nearness: the element description sets of A and B overlap."""
        probe = self.probe(probe)
        other, A, B = self._sides(space, A, B, same_space, other_space)
        left = self._descriptions(space, A, probe).values()
        right = self._descriptions(other, B, probe).values()
        return bool(self._matching(left, right))

    def descriptive_closure(self, space: CWSpace, E: ComplexRef, probe: ProbeRef) -> List[CellComplex]:
        """Registered shapes descriptively near E, in registry order."""
        E = complex_kernel.resolve(space, E)
        if not E.cells:
            return []
        return [A for A in space.declared() if self.dnear(space, A, E, probe)]

    # Axiom checking

    def sample_complex(
        self, space: CWSpace, rng: random.Random, max_cells: int, seed_cells: Sequence[int] = ()
    ) -> CellComplex:
        """Random face-connected cell set of at most `max_cells` cells."""
        pool = sorted(seed_cells) if seed_cells else sorted(space.cells)
        size = rng.randint(1, max_cells)
        chosen = [rng.choice(pool)]
        members = set(chosen)
        frontier: Set[int] = set()
        while len(members) < size:
            last = chosen[-1]
            frontier.update(c for c in set(space.faces(last)) | space.cofaces(last) if c not in members)
            if not frontier:
                break
            pick = rng.choice(sorted(frontier))
            frontier.discard(pick)
            members.add(pick)
            chosen.append(pick)
        return space.complex_from_cells(members, "sample")

    def _draw(self, space: CWSpace, rng: random.Random, registered: List[CellComplex]) -> Tuple[CellComplex, CellComplex, CellComplex]:
        max_cells = settings.sample_max_cells

        def one(seed_cells: Sequence[int] = ()) -> CellComplex:
            if registered and not seed_cells and rng.random() < 0.25:
                return rng.choice(registered)
            return self.sample_complex(space, rng, max_cells, seed_cells)

        A = one()
        B = one(sorted(A.cells)) if rng.random() < 0.5 else one()
        C = space.complex_from_cells((), "empty") if rng.random() < 0.1 else one()
        return A, B, C

    @staticmethod
    def _show(*complexes: CellComplex) -> str:
        return ",".join("[" + " ".join(str(c) for c in sorted(x.cells)) + "]" for x in complexes)

    def _run_axioms(
        self,
        space: CWSpace,
        trials: int,
        seed: Optional[int],
        label: str,
        checks: List[Tuple[str, Callable[[CellComplex, CellComplex, CellComplex], Optional[str]]]],
        config: Optional[ProximityConfig] = None,
    ) -> AxiomReport:
        if trials < 1:
            raise InvalidArgument(f"trials must be at least 1, got {trials}")
        seed = settings.seed if seed is None else seed
        rng = random.Random(seed)
        registered = space.declared()
        witnesses: Dict[str, Optional[str]] = {name: None for name, _ in checks}

        for trial in range(trials):
            A, B, C = self._draw(space, rng, registered)
            for name, check in checks:
                if witnesses[name] is None:
                    witness = check(A, B, C)
                    if witness is not None:
                        witnesses[name] = witness
                        logger.debug(f"{name} failed on trial {trial}: {witness}")

        report = AxiomReport(
            space_name=space.name,
            relation=label,
            seed=seed,
            results=[
                AxiomResult(axiom=name, passed=witnesses[name] is None, trials=trials, witness=witnesses[name])
                for name, _ in checks
            ],
            config=config,
        )
        logger.info(f"Axiom run '{label}' on '{space.name}': {'pass' if report.passed else 'FAIL'}")
        return report

    def check_cech_axioms(
        self,
        space: CWSpace,
        relation: Optional[Relation] = None,
        trials: int = settings.default_trials,
        seed: Optional[int] = None,
    ) -> AxiomReport:
        """Sample triples and check P.0 to P.3 for a spatial relation."""
        rel = relation or self.near
        empty = space.complex_from_cells((), "empty")

        def union(X: CellComplex, Y: CellComplex) -> CellComplex:
            return space.complex_from_cells(X.cells | Y.cells, "union")

        def p0(A, B, C):
            return None if not rel(space, A, empty) and not rel(space, empty, A) else self._show(A) + ",[]"

        def p1(A, B, C):
            return None if rel(space, A, B) == rel(space, B, A) else self._show(A, B)

        def p2(A, B, C):
            return None if not (A.cells & B.cells) or rel(space, A, B) else self._show(A, B)

        def p3(A, B, C):
            if rel(space, A, union(B, C)) and not (rel(space, A, B) or rel(space, A, C)):
                return self._show(A, B, C)
            return None

        label = getattr(rel, "__name__", "relation")
        return self._run_axioms(space, trials, seed, label, [("P.0", p0), ("P.1", p1), ("P.2", p2), ("P.3", p3)])

    def check_descriptive_axioms(
        self,
        space: CWSpace,
        probe: ProbeRef,
        trials: int = settings.default_trials,
        seed: Optional[int] = None,
    ) -> AxiomReport:
        """Sample triples and check dP.0 to dP.3 plus the converse of dP.2."""
        config = ProximityConfig(probe=self.probe(probe))
        probe = config.probe
        empty = space.complex_from_cells((), "empty")

        def dn(X, Y) -> bool:
            return self.dnear(space, X, Y, probe)

        def meets(X, Y) -> bool:
            return bool(self.descriptive_intersection(space, X, Y, probe))

        def dp0(A, B, C):
            return None if not dn(A, empty) and not dn(empty, A) else self._show(A) + ",[]"

        def dp1(A, B, C):
            return None if dn(A, B) == dn(B, A) else self._show(A, B)

        def dp2(A, B, C):
            return None if not meets(A, B) or dn(A, B) else self._show(A, B)

        def dp3(A, B, C):
            # elements of B u C keep the descriptions they have in B and in C
            left = self._descriptions(space, A, probe).values()
            joined = list(self._descriptions(space, B, probe).values()) + list(self._descriptions(space, C, probe).values())
            if self._matching(left, joined) and not (dn(A, B) or dn(A, C)):
                return self._show(A, B, C)
            return None

        def converse(A, B, C):
            return None if not dn(A, B) or meets(A, B) else self._show(A, B)

        return self._run_axioms(
            space, trials, seed, f"dnear[{probe.name}]",
            [("dP.0", dp0), ("dP.1", dp1), ("dP.2", dp2), ("dP.3", dp3), ("dP.2-converse", converse)],
            config,
        )


# Global proximity service instance
proximity_service = ProximityService()
