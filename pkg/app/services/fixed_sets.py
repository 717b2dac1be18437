"""
Maps on registered complexes, dpc checks, descriptive fixed and amiable
fixed sets, almost-amiable shapes and the fixed-set property checks
"""

import logging
from itertools import combinations
from typing import FrozenSet, List, Optional, Tuple

from pydantic import ValidationError

from app.models.schemas import (
    AlmostAmiableReport,
    AmiabilityReport,
    BoundaryFixedReport,
    CellComplex,
    DpcMap,
    DpcReport,
    FixedSetReport,
    Threshold,
)
from app.services.complex_kernel import ComplexKernel, ComplexRef, CWSpace, complex_kernel
from app.services.proximity import ProbeRef, ProximityService, proximity_service
from app.utils.errors import EmptyBoundary, InvalidArgument, NotFound, NotTotal, ScalarRequired

logger = logging.getLogger(__name__)

IDENTITY = DpcMap(name="identity", kind="identity")
BOUNDARY_COMPLEMENT = DpcMap(name="boundary_complement", kind="boundary_complement")

BUILTIN_MAPS = {m.name: m for m in (IDENTITY, BOUNDARY_COMPLEMENT)}


class FixedSetService:
    """Service for fixed subsets of maps under descriptive proximity."""

    def __init__(self, proximity: ProximityService = proximity_service, kernel: ComplexKernel = complex_kernel):
        """Initialize with the proximity service and complex kernel."""
        self.proximity = proximity
        self.kernel = kernel

    def apply(self, dpc_map: DpcMap, space: CWSpace, A: ComplexRef) -> CellComplex:
        """Image of A; the boundary complement K minus the boundary region of A is cl(A)."""
        A = self.kernel.resolve(space, A)
        if dpc_map.kind == "identity":
            return A
        if dpc_map.kind == "boundary_complement":
            cells = space.universe.cells - self.kernel.boundary_region(space, A).cells
            return space.complex_from_cells(cells, f"{dpc_map.name}({A.name})")
        if A.name not in dpc_map.table:
            raise NotTotal(f"map '{dpc_map.name}' has no entry for '{A.name}'")
        return space.get(dpc_map.table[A.name])

    # dpc

    def check_dpc(
        self, dpc_map: DpcMap, space: CWSpace, probe: ProbeRef, mode: str = "existential"
    ) -> DpcReport:
        """Exhaustive over distinct pairs of registered shapes that are descriptively near."""
        if mode not in ("existential", "universal"):
            raise InvalidArgument(f"unknown dpc mode '{mode}'")

        checked = 0
        witness: Optional[Tuple[str, str]] = None
        for A, B in combinations(space.declared(), 2):
            if not self.proximity.dnear(space, A, B, probe):
                continue
            checked += 1
            preserved = self.proximity.dnear(
                space, self.apply(dpc_map, space, A), self.apply(dpc_map, space, B), probe
            )
            if mode == "existential" and preserved:
                witness = (A.name, B.name)
                break
            if mode == "universal" and not preserved:
                witness = (A.name, B.name)
                break

        if mode == "existential":
            holds = witness is not None
        else:
            holds = witness is None
        logger.info(f"dpc[{mode}] of '{dpc_map.name}' on '{space.name}': {holds} after {checked} near pairs")
        return DpcReport(holds=holds, mode=mode, pairs_checked=checked, witness=witness)

    def is_dpc(self, dpc_map: DpcMap, space: CWSpace, probe: ProbeRef, mode: str = "existential") -> bool:
        return self.check_dpc(dpc_map, space, probe, mode).holds

    # Fixed and amiable subsets

    def descriptive_fixed(self, dpc_map: DpcMap, space: CWSpace, A: ComplexRef, probe: ProbeRef) -> bool:
        """Phi(f(A)) equals Phi(A)."""
        image = self.apply(dpc_map, space, A)
        return self.proximity.describe(space, image, probe).matches(
            self.proximity.describe(space, A, probe), self.proximity.tolerance
        )

    def amiable_pair(
        self, dpc_map: DpcMap, space: CWSpace, A: ComplexRef, B: ComplexRef, probe: ProbeRef
    ) -> AmiabilityReport:
        """f(A) and B share a description; the smallest shared element is the witness."""
        image = self.apply(dpc_map, space, A)
        shared = self.proximity.descriptive_intersection(space, image, B, probe)
        return AmiabilityReport(holds=bool(shared), witness=min(shared) if shared else None)

    def amiable(self, dpc_map: DpcMap, space: CWSpace, A: ComplexRef, probe: ProbeRef) -> bool:
        return self.amiable_pair(dpc_map, space, A, A, probe).holds

    def fixed_set_report(self, dpc_map: DpcMap, space: CWSpace, A: ComplexRef, probe: ProbeRef) -> FixedSetReport:
        A = self.kernel.resolve(space, A)
        amiability = self.amiable_pair(dpc_map, space, A, A, probe)
        return FixedSetReport(
            subject=A.name,
            dpc_existential=self.is_dpc(dpc_map, space, probe, "existential"),
            dpc_universal=self.is_dpc(dpc_map, space, probe, "universal"),
            descriptive_fixed=self.descriptive_fixed(dpc_map, space, A, probe),
            amiable=amiability.holds,
            witness=amiability.witness.render() if amiability.witness else None,
        )

    def almost_amiable_report(
        self,
        space: CWSpace,
        E: ComplexRef,
        E2: ComplexRef,
        dpc_map: DpcMap,
        probe: ProbeRef,
        th: float,
    ) -> AlmostAmiableReport:
        """|Phi(f(E)) - Phi(f(E2))| <= th for scalar descriptions."""
        try:
            threshold = Threshold(th=th).th
        except ValidationError as e:
            raise InvalidArgument(f"threshold must be positive, got {th}", str(e.errors()[0]["msg"]))

        probe = self.proximity.probe(probe)
        if probe.arity != 1:
            raise ScalarRequired(f"probe '{probe.name}' has arity {probe.arity}; almost amiability needs scalars")

        left = self.proximity.describe(space, self.apply(dpc_map, space, E), probe)
        right = self.proximity.describe(space, self.apply(dpc_map, space, E2), probe)
        if len(left.values) != 1 or len(right.values) != 1:
            raise ScalarRequired(f"probe '{probe.name}' produced a vector description")

        difference = abs(left.scalar() - right.scalar())
        integral = left.integral[0] and right.integral[0]
        return AlmostAmiableReport(
            holds=difference <= threshold,
            left=left.scalar(),
            right=right.scalar(),
            difference=difference,
            integral=integral,
        )

    def almost_amiable(
        self, space: CWSpace, E: ComplexRef, E2: ComplexRef, dpc_map: DpcMap, probe: ProbeRef, th: float
    ) -> bool:
        return self.almost_amiable_report(space, E, E2, dpc_map, probe, th).holds

    # Property checks

    def jordan_partition_check(self, space: CWSpace, A: ComplexRef) -> bool:
        """cl(A) and its boundary region are disjoint and together make up K."""
        closed = self.kernel.closure(space, A).cells
        region = self.kernel.boundary_region(space, A).cells
        return not (closed & region) and (closed | region) == space.universe.cells

    def _normalized(self, space: CWSpace, X: CellComplex) -> FrozenSet[int]:
        return self.kernel.closure(space, X).cells

    def fixed_cell_complex_check(
        self, space: CWSpace, probe: ProbeRef, dpc_map: DpcMap = BOUNDARY_COMPLEMENT
    ) -> bool:
        """The map sends the descriptive closure of every registered shape onto itself."""
        shapes = space.declared()
        if not shapes:
            raise InvalidArgument(f"space '{space.name}' has no registered shapes")

        for E in shapes:
            closure_set = self.proximity.descriptive_closure(space, E, probe)
            before = {self._normalized(space, X) for X in closure_set}
            after = {self._normalized(space, self.apply(dpc_map, space, X)) for X in closure_set}
            if before != after:
                logger.info(f"Descriptive closure of '{E.name}' is not mapped onto itself")
                return False
            for X in closure_set:
                if not self.descriptive_fixed(dpc_map, space, X, probe):
                    logger.info(f"'{X.name}' in the descriptive closure of '{E.name}' changes description")
                    return False
        return True

    def ribbon_fixed_set_check(
        self, space: CWSpace, ribbon: ComplexRef, probe: ProbeRef, dpc_map: DpcMap = BOUNDARY_COMPLEMENT
    ) -> bool:
        """fixed_cell_complex_check with the ribbon's closure as the universe."""
        sub = self.kernel.restrict(space, ribbon)
        return self.fixed_cell_complex_check(sub, probe, dpc_map)

    def shape_boundary_fixed_report(
        self, space: CWSpace, A: ComplexRef, probe: ProbeRef = "beta0"
    ) -> BoundaryFixedReport:
        """The closed boundary region of A is a fixed and amiable set of the boundary complement."""
        A = self.kernel.resolve(space, A)
        try:
            region = self.kernel.boundary_region(space, A)
            if region.is_empty():
                raise EmptyBoundary(f"'{A.name}' has an empty boundary region")

            closed_region = self.kernel.closure(space, region)
            image = self.apply(BOUNDARY_COMPLEMENT, space, closed_region)
            fixed = image.cells == closed_region.cells
            amiable = bool(self.proximity.descriptive_intersection(space, image, closed_region, probe))
            discrepancy = sorted(closed_region.cells - region.cells)
            if discrepancy:
                logger.debug(f"Closing the boundary region of '{A.name}' added {len(discrepancy)} cells")
            return BoundaryFixedReport(fixed=fixed, amiable=amiable, discrepancy=discrepancy)

        except EmptyBoundary as e:
            logger.error(f"Error checking boundary fixed set: {e}")
            raise

    def shape_boundary_fixed_check(self, space: CWSpace, A: ComplexRef, probe: ProbeRef = "beta0") -> Tuple[bool, bool]:
        report = self.shape_boundary_fixed_report(space, A, probe)
        return report.fixed, report.amiable

    def resolve_map(self, space: CWSpace, name: str, tables: Optional[List[DpcMap]] = None) -> DpcMap:
        """Built-in map by name, or a table map declared alongside the space."""
        if name in BUILTIN_MAPS:
            return BUILTIN_MAPS[name]
        for candidate in tables or []:
            if candidate.name == name:
                return candidate
        raise NotFound(f"unknown map '{name}'", f"built-in: {', '.join(BUILTIN_MAPS)}")


# Global fixed-set service instance
fixed_set_service = FixedSetService()
