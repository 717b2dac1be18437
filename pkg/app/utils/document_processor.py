"""
Parsing and canonical serialization of .space documents
"""

import logging
import re
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Set, Tuple

from app.models.schemas import (
    CellRecord,
    ComplexRecord,
    DpcMap,
    MapRecord,
    ProbeRecord,
    SpaceDocument,
    VertexRecord,
)
from app.services.complex_kernel import CWSpace, SpaceBuilder
from app.utils.errors import DanglingReference, DocumentError, DocumentSyntaxError, DuplicateId, NotFound

logger = logging.getLogger(__name__)

HEADER = "proxima-space"
FORMAT_VERSION = "1"
MAP_KINDS = ("identity", "boundary_complement", "table")

Token = Tuple[str, int]


def _tokens(line: str) -> List[Token]:
    """Whitespace-separated tokens with their 1-based columns."""
    return [(m.group(), m.start() + 1) for m in re.finditer(r"\S+", line)]


class SpaceDocumentProcessor:
    """Service for reading and writing spaces in the line-oriented text format."""

    def parse(self, text: str) -> SpaceDocument:
        """Parse document text; records come back in canonical order."""
        document = SpaceDocument()
        seen_header = False
        vertex_ids: Set[int] = set()
        cell_ids: Set[int] = set()
        names: Dict[str, Set[str]] = {"complex": set(), "probe": set(), "map": set()}

        for number, raw in enumerate(text.splitlines(), 1):
            stripped = raw.strip()
            if not stripped or stripped.startswith("#"):
                continue
            tokens = _tokens(raw)
            keyword, column = tokens[0]

            if not seen_header:
                if keyword != HEADER or len(tokens) != 2:
                    raise DocumentSyntaxError(f"expected '{HEADER} {FORMAT_VERSION}' header", number, column)
                if tokens[1][0] != FORMAT_VERSION:
                    raise DocumentSyntaxError(f"unsupported format version '{tokens[1][0]}'", number, tokens[1][1])
                document.version = tokens[1][0]
                seen_header = True
                continue

            args = tokens[1:]
            if keyword == "space":
                self._arity(args, 1, 1, number, column, "space <name>")
                document.name = args[0][0]
            elif keyword == "vertex":
                self._arity(args, 3, 3, number, column, "vertex <id> <x> <y>")
                vid = self._int(args[0], number)
                if vid in vertex_ids:
                    raise DuplicateId(f"duplicate vertex id {vid} at line {number}")
                vertex_ids.add(vid)
                document.vertices.append(VertexRecord(
                    id=vid, x=self._rational(args[1], number), y=self._rational(args[2], number)
                ))
            elif keyword == "cell":
                self._arity(args, 3, 5, number, column, "cell <id> <dim> <vertex>...")
                cid = self._int(args[0], number)
                dim = self._int(args[1], number)
                if dim not in (0, 1, 2) or len(args) - 2 != dim + 1:
                    raise DocumentSyntaxError(f"a {dim}-cell needs {dim + 1} vertices", number, args[1][1])
                if cid in cell_ids:
                    raise DuplicateId(f"duplicate cell id {cid} at line {number}")
                cell_ids.add(cid)
                document.cells.append(CellRecord(id=cid, dim=dim, vertices=[self._int(t, number) for t in args[2:]]))
            elif keyword == "complex":
                self._arity(args, 1, None, number, column, "complex <name> <cell>... [| <generator>...]")
                name = self._unique(names["complex"], args[0][0], "complex", number)
                rest = list(args[1:])
                bar = next((i for i, t in enumerate(rest) if t[0] == "|"), len(rest))
                document.complexes.append(ComplexRecord(
                    name=name,
                    cells=[self._int(t, number) for t in rest[:bar]],
                    generators=[self._int(t, number) for t in rest[bar + 1:]],
                ))
            elif keyword == "probe":
                self._arity(args, 2, 2, number, column, "probe <name> <extractor>")
                name = self._unique(names["probe"], args[0][0], "probe", number)
                document.probes.append(ProbeRecord(name=name, extractor=args[1][0]))
            elif keyword == "map":
                self._arity(args, 2, None, number, column, "map <name> <kind> [<from>=<to>...]")
                name = self._unique(names["map"], args[0][0], "map", number)
                kind, kind_column = args[1]
                if kind not in MAP_KINDS:
                    raise DocumentSyntaxError(f"unknown map kind '{kind}'", number, kind_column)
                table: Dict[str, str] = {}
                for pair, pair_column in args[2:]:
                    source, sep, target = pair.partition("=")
                    if not sep or not source or not target:
                        raise DocumentSyntaxError(f"expected <from>=<to>, got '{pair}'", number, pair_column)
                    table[source] = target
                document.maps.append(MapRecord(name=name, kind=kind, table=table))
            else:
                raise DocumentSyntaxError(f"unknown record '{keyword}'", number, column)

        if not seen_header:
            raise DocumentSyntaxError(f"missing '{HEADER}' header", 1, 1)

        self._check_references(document, vertex_ids, cell_ids)
        return self._canonical(document)

    def _arity(self, args: List[Token], low: int, high, number: int, column: int, usage: str) -> None:
        if len(args) < low or (high is not None and len(args) > high):
            raise DocumentSyntaxError(f"expected '{usage}'", number, column)

    def _int(self, token: Token, number: int) -> int:
        text, column = token
        try:
            return int(text)
        except ValueError:
            raise DocumentSyntaxError(f"expected an integer, got '{text}'", number, column)

    def _rational(self, token: Token, number: int) -> Fraction:
        text, column = token
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError):
            raise DocumentSyntaxError(f"expected a rational 'p/q', got '{text}'", number, column)

    def _unique(self, seen: Set[str], name: str, kind: str, number: int) -> str:
        if name in seen:
            raise DuplicateId(f"duplicate {kind} name '{name}' at line {number}")
        seen.add(name)
        return name

    def _check_references(self, document: SpaceDocument, vertex_ids: Set[int], cell_ids: Set[int]) -> None:
        for cell in document.cells:
            missing = [v for v in cell.vertices if v not in vertex_ids]
            if missing:
                raise DanglingReference(f"cell {cell.id} references missing vertices {missing}")
        complex_names = {c.name for c in document.complexes} | {"K"}
        for complex_ in document.complexes:
            missing = [c for c in complex_.cells if c not in cell_ids]
            if missing:
                raise DanglingReference(f"complex '{complex_.name}' references missing cells {missing}")
            missing = [v for v in complex_.generators if v not in vertex_ids]
            if missing:
                raise DanglingReference(f"complex '{complex_.name}' declares missing generators {missing}")
        for map_ in document.maps:
            missing = sorted({n for pair in map_.table.items() for n in pair} - complex_names)
            if missing:
                raise DanglingReference(f"map '{map_.name}' references missing complexes {missing}")

    def _canonical(self, document: SpaceDocument) -> SpaceDocument:
        return SpaceDocument(
            version=document.version,
            name=document.name,
            vertices=sorted(document.vertices, key=lambda v: v.id),
            cells=sorted(document.cells, key=lambda c: c.id),
            complexes=sorted(
                (ComplexRecord(name=c.name, cells=sorted(set(c.cells)), generators=sorted(set(c.generators)))
                 for c in document.complexes),
                key=lambda c: c.name,
            ),
            probes=sorted(document.probes, key=lambda p: p.name),
            maps=sorted(
                (MapRecord(name=m.name, kind=m.kind, table=dict(sorted(m.table.items()))) for m in document.maps),
                key=lambda m: m.name,
            ),
        )

    def serialize(self, document: SpaceDocument) -> str:
        """Canonical text: records grouped by kind, ids and names sorted."""
        document = self._canonical(document)
        lines = [f"{HEADER} {document.version}", f"space {document.name}"]
        lines += [f"vertex {v.id} {v.x} {v.y}" for v in document.vertices]
        lines += [f"cell {c.id} {c.dim} " + " ".join(str(v) for v in c.vertices) for c in document.cells]
        for c in document.complexes:
            line = f"complex {c.name}" + "".join(f" {cid}" for cid in c.cells)
            if c.generators:
                line += " |" + "".join(f" {g}" for g in c.generators)
            lines.append(line)
        lines += [f"probe {p.name} {p.extractor}" for p in document.probes]
        for m in document.maps:
            lines.append(f"map {m.name} {m.kind}" + "".join(f" {s}={t}" for s, t in m.table.items()))
        return "\n".join(lines) + "\n"

    def document_from_space(
        self, space: CWSpace, probes: List[ProbeRecord] = (), maps: List[DpcMap] = ()
    ) -> SpaceDocument:
        """Document holding the cells and declared complexes of a space."""
        return self._canonical(SpaceDocument(
            version=FORMAT_VERSION,
            name=space.name,
            vertices=[VertexRecord(id=vid, x=p.x, y=p.y) for vid, p in space.vertices.items()],
            cells=[CellRecord(id=c.id, dim=c.dim, vertices=list(c.vertices)) for c in space.cells.values()],
            complexes=[
                ComplexRecord(name=c.name, cells=sorted(c.cells), generators=list(c.declared_generators))
                for c in space.declared()
            ],
            probes=list(probes),
            maps=[MapRecord(name=m.name, kind=m.kind, table=m.table) for m in maps],
        ))

    def space_from_document(self, document: SpaceDocument, check_planarity: bool = True) -> CWSpace:
        """Build and validate the space a document describes."""
        builder = SpaceBuilder(document.name)
        for v in document.vertices:
            builder.add_vertex(v.id, v.x, v.y)
        for c in document.cells:
            builder.add_cell(c.id, c.dim, c.vertices)
        for c in document.complexes:
            builder.register(c.name, c.cells, c.generators)
        return builder.build(check_planarity=check_planarity)

    def maps_of(self, document: SpaceDocument) -> List[DpcMap]:
        return [DpcMap(name=m.name, kind=m.kind, table=m.table) for m in document.maps]

    def load_document(self, path: str) -> SpaceDocument:
        file_path = Path(path)
        if not file_path.exists():
            raise NotFound(f"file not found: {path}")
        try:
            try:
                data = file_path.read_bytes()
            except OSError as e:
                raise DocumentError(f"cannot read '{path}': {e.strerror or e}")
            try:
                text = data.decode("utf-8")
            except UnicodeDecodeError as e:
                line = data.count(b"\n", 0, e.start) + 1
                column = e.start - (data.rfind(b"\n", 0, e.start) + 1) + 1
                raise DocumentSyntaxError("invalid UTF-8", line, column)

            document = self.parse(text)
            logger.info(f"Loaded '{file_path.name}': {len(document.cells)} cells, {len(document.complexes)} complexes")
            return document
        except DocumentError as e:
            logger.error(f"Error parsing '{path}': {e}")
            raise

    def load_space(self, path: str) -> CWSpace:
        return self.space_from_document(self.load_document(path))

    def save_space(self, space: CWSpace, path: str, maps: List[DpcMap] = ()) -> str:
        file_path = Path(path)
        file_path.parent.mkdir(parents=True, exist_ok=True)
        text = self.serialize(self.document_from_space(space, maps=maps))
        file_path.write_text(text, encoding="utf-8")
        logger.info(f"Saved space '{space.name}' to '{file_path}'")
        return str(file_path)


# Global document processor instance
document_processor = SpaceDocumentProcessor()
