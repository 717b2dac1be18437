"""
Pydantic models for cells, complexes, reports and documents
"""

from fractions import Fraction
from typing import Any, Callable, Dict, FrozenSet, List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


def _as_fraction(value: Any) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise ValueError("coordinates must be exact (int, Fraction or 'p/q')")
    return Fraction(value)


class Point2(BaseModel):
    """An exact point of the plane."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    x: Fraction
    y: Fraction

    @field_validator("x", "y", mode="before")
    @classmethod
    def _exact(cls, value: Any) -> Fraction:
        return _as_fraction(value)

    def as_tuple(self) -> Tuple[Fraction, Fraction]:
        return (self.x, self.y)


class Cell(BaseModel):
    """A vertex (0-cell), edge (1-cell) or filled triangle (2-cell)."""
    model_config = ConfigDict(frozen=True)

    id: int
    dim: Literal[0, 1, 2]
    vertices: Tuple[int, ...]

    @model_validator(mode="after")
    def _check_shape(self) -> "Cell":
        if len(self.vertices) != self.dim + 1:
            raise ValueError(f"cell {self.id}: dim {self.dim} needs {self.dim + 1} vertices")
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError(f"cell {self.id}: repeated vertex")
        return self

    @property
    def key(self) -> Tuple[int, ...]:
        """Dimension-free identity of the realization (sorted vertex ids)."""
        return tuple(sorted(self.vertices))


class CellComplex(BaseModel):
    """A named finite set of cell ids living in one space."""
    model_config = ConfigDict(frozen=True)

    name: str
    cells: FrozenSet[int] = frozenset()
    space_name: str = ""
    declared_generators: Tuple[int, ...] = ()
    origin: Literal["declared", "intersection", "derived"] = "derived"

    def __len__(self) -> int:
        return len(self.cells)

    def is_empty(self) -> bool:
        return not self.cells


class CWReport(BaseModel):
    """Outcome of checking the CW conditions on a space."""
    containment: bool
    intersection: bool
    hausdorff: bool
    notes: List[str] = []
    violations: List[str] = []

    @property
    def accepted(self) -> bool:
        return self.containment and self.intersection and self.hausdorff


class ContourReport(BaseModel):
    """The contour of a complex together with its connected loops."""
    contour: CellComplex
    loops: List[List[int]] = Field(default_factory=list, description="Closed walk per component, as vertex ids")
    closed: List[bool] = Field(default_factory=list, description="Whether each component is a closed curve")

    @property
    def multi(self) -> bool:
        return len(self.loops) > 1


class Cycle(BaseModel):
    """A simple closed vertex loop with its interior."""
    model_config = ConfigDict(frozen=True)

    loop: Tuple[int, ...]
    edges: Tuple[int, ...]
    interior: CellComplex
    filled: bool

    @model_validator(mode="after")
    def _check_loop(self) -> "Cycle":
        if len(self.loop) < 3 or len(set(self.loop)) != len(self.loop):
            raise ValueError("cycle loop must be simple with at least 3 vertices")
        if len(self.edges) != len(self.loop):
            raise ValueError("cycle needs one edge per loop vertex")
        if self.filled != (not self.interior.is_empty()):
            raise ValueError("filled flag must agree with the interior")
        return self

    def __len__(self) -> int:
        return len(self.loop)


class Ribbon(BaseModel):
    """Region between two nesting or touching filled cycles."""
    outer: Cycle
    inner: Cycle
    body: CellComplex


class ShapeFixture(BaseModel):
    """A hand-digitized reference shape and its declared generators."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    name: str
    space: Any = Field(..., description="The CWSpace holding the shape")
    declared_generators: List[int] = []
    primary: str = Field(..., description="Complex used when only the fixture name is given")
    labels: Dict[str, int] = Field(default_factory=dict, description="Label -> vertex id")
    expected_filled_cycle: bool = True


class MoveCertificate(BaseModel):
    """A vertex written as k moves from a generator along a loop."""
    model_config = ConfigDict(frozen=True)

    vertex: int
    generator: int
    k: int = Field(..., ge=0)
    direction: Literal[1, -1] = 1
    cycle: int = Field(0, ge=0, description="Index of the loop the moves run along")

    @model_validator(mode="after")
    def _zero_move(self) -> "MoveCertificate":
        if (self.k == 0) != (self.vertex == self.generator):
            raise ValueError("k = 0 exactly when the vertex is the generator")
        return self

    def signed(self) -> int:
        return self.direction * self.k

    def add(self, other: "MoveCertificate", loop_length: int) -> int:
        """Net moves of two certificates on one loop, reduced mod its length."""
        if other.generator != self.generator or other.cycle != self.cycle:
            raise ValueError("certificates must share a generator and a loop")
        return (self.signed() + other.signed()) % loop_length

    def inverse(self, loop_length: int) -> int:
        return (-self.signed()) % loop_length

    def returns_to_generator(self, loop_length: int) -> bool:
        """kv - kv = 0v."""
        return (self.signed() + self.inverse(loop_length)) % loop_length == 0


class FreeAbelianRep(BaseModel):
    """Generators plus one move certificate per boundary vertex."""
    generators: List[int]
    certificates: List[MoveCertificate] = []
    group_name: str = "G"
    complex_name: str = ""
    loops: List[List[int]] = Field(default_factory=list, description="Loops the moves run along")

    def certificate_for(self, vertex: int) -> Optional[MoveCertificate]:
        for certificate in self.certificates:
            if certificate.vertex == vertex:
                return certificate
        return None


class BettiNumbers(BaseModel):
    beta0: int = Field(..., ge=0, description="Number of filled triangles")
    beta_alpha: int = Field(..., ge=0, description="Number of declared generators")


class ProbeFunction(BaseModel):
    """Named feature extractor used by descriptive proximity."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    name: str
    extractor: str = Field(..., description="Built-in feature id or 'custom'")
    arity: int = Field(1, ge=1)
    set_fn: Optional[Callable[..., Any]] = Field(None, exclude=True)
    element_fn: Optional[Callable[..., Any]] = Field(None, exclude=True)

    @property
    def is_custom(self) -> bool:
        return self.set_fn is not None or self.element_fn is not None


class Description(BaseModel):
    """A feature vector; integral components compare exactly."""
    model_config = ConfigDict(frozen=True)

    values: Tuple[float, ...]
    integral: Tuple[bool, ...]

    @model_validator(mode="after")
    def _aligned(self) -> "Description":
        if len(self.values) != len(self.integral):
            raise ValueError("values and integral flags must align")
        return self

    def matches(self, other: "Description", tolerance: float) -> bool:
        if len(self.values) != len(other.values) or self.integral != other.integral:
            return False
        mine = np.asarray(self.values, dtype=float)
        theirs = np.asarray(other.values, dtype=float)
        exact = np.asarray(self.integral, dtype=bool)
        if not np.array_equal(mine[exact], theirs[exact]):
            return False
        return bool(np.all(np.isclose(mine[~exact], theirs[~exact], rtol=0.0, atol=tolerance)))

    def scalar(self) -> float:
        return self.values[0]

    def render(self) -> str:
        parts = [
            str(int(v)) if flag else repr(v) for v, flag in zip(self.values, self.integral)
        ]
        return "(" + ",".join(parts) + ")"


class ElementRef(BaseModel):
    """A cell named together with the space it lives in."""
    model_config = ConfigDict(frozen=True)

    space_name: str
    cell_id: int

    def __lt__(self, other: "ElementRef") -> bool:
        return (self.space_name, self.cell_id) < (other.space_name, other.cell_id)

    def render(self) -> str:
        return f"{self.space_name}:{self.cell_id}"


class ProximityConfig(BaseModel):
    """The spatial rule and the single probe behind a descriptive query."""
    spatial_rule: Literal["closure_overlap"] = "closure_overlap"
    probe: ProbeFunction


class AxiomResult(BaseModel):
    axiom: str
    passed: bool
    trials: int
    witness: Optional[str] = None

    def line(self) -> str:
        if self.passed:
            return f"{self.axiom} pass ({self.trials} trials)"
        return f"{self.axiom} FAIL witness=<{self.witness}>"


class AxiomReport(BaseModel):
    """Per-axiom verdicts of a seeded sampling run."""
    space_name: str
    relation: str
    seed: int
    results: List[AxiomResult] = []
    config: Optional[ProximityConfig] = Field(None, description="Set for descriptive runs")

    @property
    def passed(self) -> bool:
        return all(result.passed for result in self.results)

    def result(self, axiom: str) -> AxiomResult:
        for result in self.results:
            if result.axiom == axiom:
                return result
        raise KeyError(axiom)


class DpcMap(BaseModel):
    """A map on the registered complexes of a space."""
    name: str
    kind: Literal["identity", "boundary_complement", "table"]
    table: Dict[str, str] = Field(default_factory=dict, description="Complex name -> image complex name")


class DpcReport(BaseModel):
    holds: bool
    mode: Literal["existential", "universal"]
    pairs_checked: int
    witness: Optional[Tuple[str, str]] = None


class AmiabilityReport(BaseModel):
    holds: bool
    witness: Optional[ElementRef] = None


class AlmostAmiableReport(BaseModel):
    holds: bool
    left: float
    right: float
    difference: float
    integral: bool = True

    def render(self) -> str:
        def fmt(value: float) -> str:
            return str(int(value)) if self.integral else repr(value)

        verdict = "true" if self.holds else "false"
        return f"{verdict} (|{fmt(self.left)}-{fmt(self.right)}|={fmt(self.difference)})"


class FixedSetReport(BaseModel):
    """Fixed-set verdicts for one complex under one map and probe."""
    subject: str
    dpc_existential: bool
    dpc_universal: bool
    descriptive_fixed: bool
    amiable: bool
    witness: Optional[str] = None

    def lines(self) -> List[str]:
        rows = [
            f"subject={self.subject}",
            f"dpc_existential={str(self.dpc_existential).lower()}",
            f"dpc_universal={str(self.dpc_universal).lower()}",
            f"descriptive_fixed={str(self.descriptive_fixed).lower()}",
            f"amiable={str(self.amiable).lower()}",
        ]
        if self.witness is not None:
            rows.append(f"witness={self.witness}")
        return rows


class Threshold(BaseModel):
    th: float = Field(..., gt=0)


class BoundaryFixedReport(BaseModel):
    fixed: bool
    amiable: bool
    discrepancy: List[int] = Field(default_factory=list, description="Cells added by closing the boundary region")


class VertexRecord(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    id: int
    x: Fraction
    y: Fraction

    @field_validator("x", "y", mode="before")
    @classmethod
    def _exact(cls, value: Any) -> Fraction:
        return _as_fraction(value)


class CellRecord(BaseModel):
    id: int
    dim: int
    vertices: List[int]


class ComplexRecord(BaseModel):
    name: str
    cells: List[int]
    generators: List[int] = []


class ProbeRecord(BaseModel):
    name: str
    extractor: str


class MapRecord(BaseModel):
    name: str
    kind: str
    table: Dict[str, str] = {}


class SpaceDocument(BaseModel):
    """Text-format view of one space."""
    version: str = "1"
    name: str = "space"
    vertices: List[VertexRecord] = []
    cells: List[CellRecord] = []
    complexes: List[ComplexRecord] = []
    probes: List[ProbeRecord] = []
    maps: List[MapRecord] = []


class RenderStyle(BaseModel):
    """Colors and canvas geometry for SVG output."""
    width: int = Field(640, gt=0)
    height: int = Field(480, gt=0)
    margin: int = Field(20, ge=0)
    interior_fill: str = "#7fc97f"
    contour_stroke: str = "#1b5e20"
    boundary_fill: str = "#fdb462"
    stroke_width: float = Field(1.0, gt=0)
