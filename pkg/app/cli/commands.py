"""
Command-line verbs over shipped fixtures and .space documents
"""

import argparse
import contextlib
import io
import logging
from pathlib import Path
from typing import Dict, List, NamedTuple, Optional, Tuple

from app.models.schemas import Description, DpcMap
from app.services.algebra import algebra_service
from app.services.complex_kernel import CWSpace, complex_kernel
from app.services.cycle_ribbon import cycle_service
from app.services.fixed_sets import BUILTIN_MAPS, fixed_set_service
from app.services.fixtures import ALIASES, fixture_factory
from app.services.proximity import EXTRACTORS, proximity_service
from app.services.renderer import svg_renderer
from app.utils.config import settings
from app.utils.document_processor import document_processor
from app.utils.errors import InvalidArgument, NotFound, ProximaError

logger = logging.getLogger(__name__)

PASS = 0
PROPERTY_FAILURE = 1

Result = Tuple[int, str]


class CommandParser(argparse.ArgumentParser):
    """ArgumentParser that raises instead of exiting on bad usage."""

    def error(self, message: str):
        raise InvalidArgument(message, self.format_usage().strip())


class Source(NamedTuple):
    key: str
    space: CWSpace
    primary: Optional[str]
    maps: List[DpcMap]


class Selection(NamedTuple):
    """The space a command works in and the complex names it was asked about."""
    space: CWSpace
    names: List[str]
    maps: List[DpcMap]
    sources: List[Source]
    shape_sources: List[Source]
    local_names: List[str]


def _flag(value: bool) -> str:
    return "true" if value else "false"


def _plain(description: Description) -> str:
    return description.render()[1:-1]


class InputResolver:
    """Loads fixtures and documents once and resolves shape arguments against them."""

    def __init__(self):
        self._loaded: Dict[str, Source] = {}

    def source(self, key: str) -> Source:
        if key.endswith(".space"):
            key = str(Path(key))
        else:
            key = fixture_factory.canonical_name(key)
        if key not in self._loaded:
            self._loaded[key] = self._load(key)
        return self._loaded[key]

    def _load(self, key: str) -> Source:
        if key.endswith(".space"):
            document = document_processor.load_document(key)
            space = document_processor.space_from_document(document)
            primary = document.complexes[0].name if len(document.complexes) == 1 else None
            return Source(key, space, primary, document_processor.maps_of(document))
        fixture = fixture_factory.build_fixture(key)
        return Source(key, fixture.space, fixture.primary, [])

    def select(self, fixtures: List[str], positionals: List[str], wanted: int) -> Selection:
        """Split positionals into documents and shapes, then place every shape in one space."""
        source_keys = list(fixtures or []) + [p for p in positionals if p.endswith(".space")]
        tokens = [p for p in positionals if not p.endswith(".space")]
        sources = [self.source(key) for key in source_keys]
        default = sources[0] if len(sources) == 1 else None

        refs: List[Tuple[Source, Optional[str]]] = []
        for token in tokens:
            if ":" in token:
                key, _, name = token.rpartition(":")
                refs.append((self.source(key), name))
            elif fixture_factory.is_fixture(token):
                refs.append((self.source(token), None))
            elif default is not None:
                refs.append((default, token))
            else:
                raise NotFound(f"unknown fixture '{token}'", "name a shape with --fixture NAME or a .space file")

        if not refs:
            if default is None:
                raise InvalidArgument("give one fixture (--fixture NAME) or one .space document")
            refs.append((default, None))
        if wanted and len(refs) > wanted:
            raise InvalidArgument(f"expected at most {wanted} shapes, got {len(refs)}")

        resolved: List[Tuple[Source, str]] = []
        for source, name in refs:
            if name is None:
                if source.primary is None:
                    raise InvalidArgument(f"'{source.key}' holds several complexes; name one")
                name = source.primary
            source.space.get(name)
            resolved.append((source, name))

        shape_sources = [source for source, _ in resolved]
        local_names = [name for _, name in resolved]
        distinct = list({source.key: source for source in shape_sources}.values())
        if len(distinct) == 1:
            only = distinct[0]
            return Selection(only.space, local_names, only.maps, sources or distinct, shape_sources, local_names)

        union = complex_kernel.disjoint_union([s.space for s in distinct], "+".join(s.space.name for s in distinct))
        names = [f"{source.space.name}.{name}" for source, name in resolved]
        return Selection(union, names, [], sources or distinct, shape_sources, local_names)

    def single_space(self, fixtures: List[str], positionals: List[str]) -> Source:
        keys = list(fixtures or []) + list(positionals or [])
        if len(keys) != 1:
            raise InvalidArgument("give exactly one fixture or .space document")
        return self.source(keys[0])


def _map(selection: Selection, name: str) -> DpcMap:
    return fixed_set_service.resolve_map(selection.space, name, selection.maps)


# Command handlers

def cmd_validate(args, resolver: InputResolver) -> Result:
    source = resolver.single_space(args.fixture, args.inputs)
    space = source.space
    report = complex_kernel.verify_cw_conditions(space)
    lines = [
        f"space={space.name}",
        f"cells={len(space.cells)}",
        f"complexes={len(space.declared())}",
        f"containment={_flag(report.containment)}",
        f"intersection={_flag(report.intersection)}",
        f"hausdorff={_flag(report.hausdorff)}",
    ]
    lines += [f"note={note}" for note in report.notes]
    lines += [f"violation={violation}" for violation in report.violations]
    return (PASS if report.accepted else PROPERTY_FAILURE), "\n".join(lines)


def cmd_betti(args, resolver: InputResolver) -> Result:
    selection = resolver.select(args.fixture, args.inputs, 1)
    space, name = selection.space, selection.names[0]
    betti = algebra_service.betti_of(space, name)
    line = f"beta0={betti.beta0} beta_alpha={betti.beta_alpha}"
    if args.probe and args.probe not in ("beta0", "beta_alpha"):
        line += f" {args.probe}={_plain(proximity_service.describe(space, name, args.probe))}"
    return PASS, line


def cmd_boundary(args, resolver: InputResolver) -> Result:
    selection = resolver.select(args.fixture, args.inputs, 1)
    space, name = selection.space, selection.names[0]
    contour = complex_kernel.contour_report(space, name)
    verdict, reason = cycle_service.shape_closure_report(space, name)
    lines = [
        f"complex={name}",
        f"closure={len(complex_kernel.closure(space, name))}",
        f"interior={len(complex_kernel.interior(space, name))}",
        f"contour={len(contour.contour)}",
        f"contour_components={len(contour.loops)}",
        f"boundary_region={len(complex_kernel.boundary_region(space, name))}",
        f"filled_cycle={_flag(verdict)}",
        f"reason={reason}",
        f"jordan_partition={_flag(fixed_set_service.jordan_partition_check(space, name))}",
    ]
    return PASS, "\n".join(lines)


def cmd_cycles(args, resolver: InputResolver) -> Result:
    selection = resolver.select(args.fixture, args.inputs, 1)
    space, name = selection.space, selection.names[0]
    cycles = cycle_service.extract_cycles(space, name)
    lines = [f"cycles={len(cycles)}"]
    for i, cycle in enumerate(cycles):
        loop = ",".join(str(v) for v in cycle.loop)
        lines.append(f"cycle={i} filled={_flag(cycle.filled)} length={len(cycle)} loop={loop} interior={len(cycle.interior)}")

    generators = space.get(name).declared_generators
    if generators:
        rep = algebra_service.free_fg_rep(space, name, generators)
        lines.append(f"group={rep.group_name} verified={_flag(algebra_service.verify_free(rep))}")
        lines += [
            f"cert vertex={c.vertex} generator={c.generator} k={c.k} cycle={c.cycle}"
            for c in rep.certificates
        ]
    return PASS, "\n".join(lines)


def cmd_axioms(args, resolver: InputResolver) -> Result:
    source = resolver.single_space(args.fixture, args.inputs)
    seed = settings.seed if args.seed is None else args.seed
    spatial = proximity_service.check_cech_axioms(source.space, trials=args.trials, seed=seed)
    descriptive = proximity_service.check_descriptive_axioms(source.space, args.probe, trials=args.trials, seed=seed)
    lines = [result.line() for result in spatial.results + descriptive.results]
    passed = spatial.passed and descriptive.passed
    return (PASS if passed else PROPERTY_FAILURE), "\n".join(lines)


def cmd_fixed(args, resolver: InputResolver) -> Result:
    selection = resolver.select(args.fixture, args.inputs, 1)
    space, name = selection.space, selection.names[0]
    dpc_map = _map(selection, args.map)
    report = fixed_set_service.fixed_set_report(dpc_map, space, name, args.probe)
    lines = report.lines()
    lines.append(f"jordan_partition={_flag(fixed_set_service.jordan_partition_check(space, name))}")
    lines.append(f"fixed_cell_complex={_flag(fixed_set_service.fixed_cell_complex_check(space, args.probe, dpc_map))}")
    if complex_kernel.boundary_region(space, name).is_empty():
        lines.append("shape_boundary=empty")
    else:
        boundary = fixed_set_service.shape_boundary_fixed_report(space, name, args.probe)
        lines.append(f"shape_boundary_fixed={_flag(boundary.fixed)}")
        lines.append(f"shape_boundary_amiable={_flag(boundary.amiable)}")
    return PASS, "\n".join(lines)


def cmd_amiable(args, resolver: InputResolver) -> Result:
    selection = resolver.select(args.fixture, args.inputs, 2)
    names = selection.names
    first, second = names[0], names[-1]
    report = fixed_set_service.amiable_pair(_map(selection, args.map), selection.space, first, second, args.probe)
    text = _flag(report.holds)
    if report.witness is not None:
        text += f" witness={report.witness.render()}"
    return (PASS if report.holds else PROPERTY_FAILURE), text


def cmd_almost_amiable(args, resolver: InputResolver) -> Result:
    selection = resolver.select(args.fixture, args.inputs, 2)
    if len(selection.names) != 2:
        raise InvalidArgument("almost-amiable compares exactly two shapes")
    first, second = selection.names
    report = fixed_set_service.almost_amiable_report(
        selection.space, first, second, _map(selection, args.map), args.probe, args.th
    )
    return (PASS if report.holds else PROPERTY_FAILURE), report.render()


def cmd_dnear(args, resolver: InputResolver) -> Result:
    selection = resolver.select(args.fixture, args.inputs, 2)
    if len(selection.shape_sources) != 2:
        raise InvalidArgument("dnear compares exactly two shapes")
    left, right = selection.shape_sources
    if left.key == right.key:
        first, second = selection.names
        shared = proximity_service.descriptive_intersection(selection.space, first, second, args.probe)
    else:
        # one shape per universe: compare across spaces
        first, second = selection.local_names
        shared = proximity_service.descriptive_intersection(
            left.space, first, second, args.probe, same_space=False, other_space=right.space
        )
    verdict = bool(shared)
    return (PASS if verdict else PROPERTY_FAILURE), f"{_flag(verdict)} ({len(shared)} shared elements)"


def cmd_render(args, resolver: InputResolver) -> Result:
    selection = resolver.select(args.fixture, args.inputs, 1)
    svg = svg_renderer.render_svg(selection.space, selection.names[0])
    if args.output:
        path = Path(args.output)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(svg, encoding="utf-8")
        return PASS, f"wrote {path}"
    return PASS, svg


def cmd_fixture(args, resolver: InputResolver) -> Result:
    if args.list or not args.name:
        shortcuts = {full: short for short, full in ALIASES.items()}
        return PASS, "\n".join(f"{name} ({shortcuts[name]})" if name in shortcuts else name
                               for name in fixture_factory.names)
    source = resolver.source(args.name)
    maps = list(BUILTIN_MAPS.values())
    if args.output:
        return PASS, f"wrote {document_processor.save_space(source.space, args.output, maps=maps)}"
    return PASS, document_processor.serialize(document_processor.document_from_space(source.space, maps=maps))


# Parser

def _inputs(sub: argparse.ArgumentParser, help_text: str = "fixture names, .space documents and shapes") -> None:
    sub.add_argument("--fixture", action="append", default=[], help="fixture to load (repeatable)")
    sub.add_argument("inputs", nargs="*", help=help_text)


def build_parser() -> argparse.ArgumentParser:
    parser = CommandParser(prog="proxima", description=f"{settings.app_name}: planar CW spaces, descriptive proximity and fixed sets")
    parser.add_argument("--version", action="version", version=f"{settings.app_name} {settings.app_version}")
    commands = parser.add_subparsers(dest="command", metavar="command")
    probes = sorted(EXTRACTORS)

    sub = commands.add_parser("validate", help="check the CW conditions of a space")
    _inputs(sub, "one fixture or .space document")
    sub.set_defaults(handler=cmd_validate)

    sub = commands.add_parser("betti", help="beta0 and beta_alpha of a shape")
    _inputs(sub)
    sub.add_argument("--probe", choices=probes, default="beta0")
    sub.set_defaults(handler=cmd_betti)

    sub = commands.add_parser("boundary", help="closure, contour, interior and boundary region sizes")
    _inputs(sub)
    sub.set_defaults(handler=cmd_boundary)

    sub = commands.add_parser("cycles", help="boundary cycles and move certificates")
    _inputs(sub)
    sub.set_defaults(handler=cmd_cycles)

    sub = commands.add_parser("axioms", help="seeded spatial and descriptive axiom checks")
    _inputs(sub, "one fixture or .space document")
    sub.add_argument("--trials", type=int, default=settings.default_trials)
    sub.add_argument("--seed", type=int, default=None)
    sub.add_argument("--probe", choices=probes, default="beta0")
    sub.set_defaults(handler=cmd_axioms)

    sub = commands.add_parser("fixed", help="fixed-set report of a shape under a map")
    _inputs(sub)
    sub.add_argument("--map", default="boundary_complement")
    sub.add_argument("--probe", choices=probes, default="beta0")
    sub.set_defaults(handler=cmd_fixed)

    sub = commands.add_parser("amiable", help="f(A) and B share a description")
    _inputs(sub)
    sub.add_argument("--map", default="boundary_complement")
    sub.add_argument("--probe", choices=probes, default="beta_alpha")
    sub.set_defaults(handler=cmd_amiable)

    sub = commands.add_parser("almost-amiable", help="scalar descriptions of two images within a threshold")
    _inputs(sub)
    sub.add_argument("--th", type=float, required=True)
    sub.add_argument("--map", default="boundary_complement")
    sub.add_argument("--probe", choices=probes, default="beta_alpha")
    sub.set_defaults(handler=cmd_almost_amiable)

    sub = commands.add_parser("dnear", help="descriptive nearness of two shapes, across spaces if needed")
    _inputs(sub)
    sub.add_argument("--probe", choices=probes, default="beta0")
    sub.set_defaults(handler=cmd_dnear)

    sub = commands.add_parser("render", help="SVG of a space with a highlighted shape")
    _inputs(sub)
    sub.add_argument("-o", "--output", default=None)
    sub.set_defaults(handler=cmd_render)

    sub = commands.add_parser("fixture", help="list fixtures or print one as a .space document")
    sub.add_argument("name", nargs="?")
    sub.add_argument("--list", action="store_true")
    sub.add_argument("-o", "--output", default=None)
    sub.set_defaults(handler=cmd_fixture)

    return parser


def run_command(argv: List[str]) -> Result:
    """Run one CLI invocation; returns the exit code and the report text."""
    parser = build_parser()
    buffer = io.StringIO()
    try:
        with contextlib.redirect_stdout(buffer):
            args = parser.parse_args(argv)
    except SystemExit as e:
        return (e.code if isinstance(e.code, int) else 0), buffer.getvalue()
    except ProximaError as e:
        return e.exit_code, f"error {e.code}: {e}"

    if args.command is None:
        return 2, parser.format_help()

    try:
        return args.handler(args, InputResolver())
    except ProximaError as e:
        logger.error(f"Command '{args.command}' failed: {e}")
        return e.exit_code, f"error {e.code}: {e}"
