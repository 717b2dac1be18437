"""
Cyclic and free finitely generated Abelian group representations of
cycle boundaries, with move certificates and Betti numbers
"""

import logging
from collections import deque
from typing import Dict, List, Mapping, Optional, Sequence

import networkx as nx

from app.models.schemas import BettiNumbers, Cycle, FreeAbelianRep, MoveCertificate
from app.services.complex_kernel import ComplexRef, CWSpace, complex_kernel
from app.services.cycle_ribbon import CycleService, cycle_service
from app.utils.errors import Mismatch, NotOnCycle, UncoveredCycle

logger = logging.getLogger(__name__)


def loop_graph(loops: Sequence[Sequence[int]]) -> nx.Graph:
    graph = nx.Graph()
    for loop in loops:
        nx.add_cycle(graph, list(loop))
    return graph


class AlgebraService:
    """Service for group representations of boundary loops."""

    def __init__(self, cycles: CycleService = cycle_service):
        """Initialize the algebra service with the cycle service it certifies against."""
        self.cycles = cycles

    def cyclic_rep(self, space: CWSpace, cycle: Cycle, generator: int) -> FreeAbelianRep:
        """Single-generator representation: every loop vertex as k moves from the generator."""
        if generator not in cycle.loop:
            raise NotOnCycle(f"generator {generator} is not on loop {list(cycle.loop)}")

        n = len(cycle.loop)
        start = cycle.loop.index(generator)
        certificates: List[MoveCertificate] = []
        for position, vertex in enumerate(cycle.loop):
            forward = (position - start) % n
            backward = (n - forward) % n
            # ties go forward along the loop order
            if forward <= backward:
                k, direction = forward, 1
            else:
                k, direction = backward, -1
            certificates.append(
                MoveCertificate(vertex=vertex, generator=generator, k=k, direction=direction)
            )
        return FreeAbelianRep(
            generators=[generator],
            certificates=certificates,
            group_name=f"G<{generator}>",
            loops=[list(cycle.loop)],
        )

    def free_fg_rep(self, space: CWSpace, A: ComplexRef, declared_generators: Sequence[int]) -> FreeAbelianRep:
        """Certify every boundary vertex of A against its nearest declared generator."""
        A = complex_kernel.resolve(space, A)
        try:
            cycles = self.cycles.filled_cycles(space, A)
            generators = sorted(set(declared_generators))

            for g in generators:
                if not any(g in c.loop for c in cycles):
                    raise NotOnCycle(f"generator {g} lies on no filled cycle of '{A.name}'")
            for c in cycles:
                if not any(g in c.loop for g in generators):
                    raise UncoveredCycle(f"cycle {list(c.loop)} of '{A.name}' carries no generator")

            adjacency: Dict[int, List[int]] = {}
            for c in cycles:
                n = len(c.loop)
                for i, u in enumerate(c.loop):
                    for w in (c.loop[(i + 1) % n], c.loop[i - 1]):
                        adjacency.setdefault(u, [])
                        if w not in adjacency[u]:
                            adjacency[u].append(w)

            distances = {g: self._bfs(adjacency, g) for g in generators}
            certificates: List[MoveCertificate] = []
            for vertex in sorted(adjacency):
                k, nearest = min((distances[g][vertex], g) for g in generators if vertex in distances[g])
                index = next(
                    (i for i, c in enumerate(cycles) if vertex in c.loop and nearest in c.loop),
                    next(i for i, c in enumerate(cycles) if vertex in c.loop),
                )
                certificates.append(MoveCertificate(vertex=vertex, generator=nearest, k=k, cycle=index))

            rep = FreeAbelianRep(
                generators=generators,
                certificates=certificates,
                group_name="G<" + ",".join(str(g) for g in generators) + ">",
                complex_name=A.name,
                loops=[list(c.loop) for c in cycles],
            )
            logger.info(f"Free representation of '{A.name}': {len(generators)} generators, {len(certificates)} certificates")
            return rep

        except (NotOnCycle, UncoveredCycle) as e:
            logger.error(f"Error building free representation of '{A.name}': {e}")
            raise

    def _bfs(self, adjacency: Mapping[int, List[int]], source: int) -> Dict[int, int]:
        distance = {source: 0}
        queue = deque([source])
        while queue:
            u = queue.popleft()
            for w in adjacency.get(u, []):
                if w not in distance:
                    distance[w] = distance[u] + 1
                    queue.append(w)
        return distance

    def verify_free(self, rep: FreeAbelianRep) -> bool:
        """Uniqueness of certificates and minimality of k, recomputed independently."""
        vertices = [c.vertex for c in rep.certificates]
        if len(vertices) != len(set(vertices)):
            return False
        if any(c.generator not in rep.generators for c in rep.certificates):
            return False

        graph = loop_graph(rep.loops)
        if set(graph.nodes) != set(vertices):
            return False

        lengths = {g: nx.single_source_shortest_path_length(graph, g) for g in rep.generators if g in graph}
        for certificate in rep.certificates:
            reachable = [lengths[g][certificate.vertex] for g in lengths if certificate.vertex in lengths[g]]
            if not reachable or certificate.k != min(reachable):
                return False
            if lengths.get(certificate.generator, {}).get(certificate.vertex) != certificate.k:
                return False
        return True

    def betti(self, space: CWSpace, A: ComplexRef, rep: FreeAbelianRep) -> BettiNumbers:
        """beta0 counts filled triangles of A, beta_alpha counts generators of rep."""
        A = complex_kernel.resolve(space, A)
        if rep.complex_name and rep.complex_name != A.name:
            raise Mismatch(f"representation built over '{rep.complex_name}', not '{A.name}'")
        closed_vertices = {
            space.cells[c].vertices[0] for c in complex_kernel.closure(space, A).cells if space.cells[c].dim == 0
        }
        stray = [c.vertex for c in rep.certificates if c.vertex not in closed_vertices]
        if stray:
            raise Mismatch(f"representation certifies vertices outside '{A.name}'", str(stray[:5]))
        return BettiNumbers(beta0=len(space.cells_of_dim(A.cells, 2)), beta_alpha=len(rep.generators))

    def betti_of(self, space: CWSpace, A: ComplexRef, declared_generators: Optional[Sequence[int]] = None) -> BettiNumbers:
        """Betti numbers of A using its own declared generators when none are given."""
        A = complex_kernel.resolve(space, A)
        generators = A.declared_generators if declared_generators is None else declared_generators
        if not A.cells and not generators:
            return self.betti(space, A, FreeAbelianRep(generators=[], complex_name=A.name))
        return self.betti(space, A, self.free_fg_rep(space, A, generators))

    def relabel(self, rep: FreeAbelianRep, permutation: Mapping[int, int]) -> FreeAbelianRep:
        """Same representation under renamed vertex ids."""
        return FreeAbelianRep(
            generators=sorted(permutation[g] for g in rep.generators),
            certificates=[
                c.model_copy(update={"vertex": permutation[c.vertex], "generator": permutation[c.generator]})
                for c in rep.certificates
            ],
            group_name=rep.group_name,
            complex_name=rep.complex_name,
            loops=[[permutation[v] for v in loop] for loop in rep.loops],
        )


# Global algebra service instance
algebra_service = AlgebraService()
