"""Bond lattices, chromatic polynomials and increasing spanning forests.

Vertices are ``1..n``. A vertex ordering is a permutation ``order`` where
``order[k]`` is the vertex placed at position ``k + 1``; relabelling a graph
by an ordering renames every vertex to its position.
"""

import itertools
import logging
import math
import random
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

import networkx as nx
from sympy.utilities.iterables import multiset_partitions

from .config import EngineConfig, SweepConfig
from .errors import ConsistencyError, InvalidGraph
from .families import SetPartition, refinement_poset
from .multichain import (
    EquivalenceReport,
    Multichain,
    induced_partition,
    theorem_equivalence_report,
)
from .poset import Polynomial, Poset, characteristic_polynomial, join
from .transversal import OrderedAtomPartition
from .utils.parallel import parallel_map

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]

# A flat is a vertex partition whose blocks induce connected subgraphs.
Flat = SetPartition


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on ``1..n`` with edges ``(i, j)``, ``i < j``."""

    n: int
    edges: Tuple[Edge, ...]

    @classmethod
    def from_edges(cls, n: int, edges: Sequence[Sequence[int]]) -> "Graph":
        """Raises InvalidGraph on loops, repeated edges or unknown vertices."""
        if n < 0:
            raise InvalidGraph("vertex count must be nonnegative")
        seen = set()
        for edge in edges:
            if len(edge) != 2:
                raise InvalidGraph(f"edge {list(edge)} does not have two endpoints")
            u, v = int(edge[0]), int(edge[1])
            if not (1 <= u <= n and 1 <= v <= n):
                raise InvalidGraph(f"edge ({u}, {v}) references a vertex outside 1..{n}")
            if u == v:
                raise InvalidGraph(f"loop at vertex {u}", witness=(u, v))
            pair = (min(u, v), max(u, v))
            if pair in seen:
                raise InvalidGraph(f"edge {pair} appears twice", witness=pair)
            seen.add(pair)
        return cls(n, tuple(sorted(seen)))

    def relabel(self, ordering: Sequence[int]) -> "Graph":
        position = ordering_positions(self.n, ordering)
        return Graph.from_edges(self.n, [(position[u], position[v]) for u, v in self.edges])

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(1, self.n + 1))
        graph.add_edges_from(self.edges)
        return graph

    def components(self) -> int:
        return nx.number_connected_components(self.to_networkx()) if self.n else 0

    def is_connected(self) -> bool:
        return self.n > 0 and self.components() == 1

    def to_dict(self) -> Dict[str, Any]:
        return {"n": self.n, "edges": [list(e) for e in self.edges]}


def ordering_positions(n: int, ordering: Sequence[int]) -> Dict[int, int]:
    """Map each vertex to its 1-based position in ``ordering``."""
    order = [int(v) for v in ordering]
    if sorted(order) != list(range(1, n + 1)):
        raise InvalidGraph(f"ordering {order} is not a permutation of 1..{n}", witness=order)
    return {v: k + 1 for k, v in enumerate(order)}


def natural_order(n: int) -> Tuple[int, ...]:
    return tuple(range(1, n + 1))


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(1, n)])


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, list(itertools.combinations(range(1, n + 1), 2)))


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(1, n)] + [(1, n)])


# Bond lattice


def is_flat(graph: Graph, part: Flat) -> bool:
    nx_graph = graph.to_networkx()
    return all(nx.is_connected(nx_graph.subgraph(block)) for block in part.blocks)


def bond_lattice(graph: Graph) -> Poset:
    """Vertex partitions with connected blocks, ordered by refinement."""
    if graph.n == 0:
        raise InvalidGraph("the bond lattice needs at least one vertex")
    parts = [
        SetPartition.from_blocks(graph.n, blocks)
        for blocks in multiset_partitions(list(range(1, graph.n + 1)))
    ]
    flats = [p for p in parts if is_flat(graph, p)]
    logger.debug("bond lattice: %d flats among %d partitions", len(flats), len(parts))
    return refinement_poset(flats, graph.n)


def edge_atom(lattice: Poset, edge: Edge) -> int:
    return lattice.index(f"{edge[0]},{edge[1]}")


# Chromatic polynomial


def _canonical(vertices: int, edges: Sequence[Edge]) -> Tuple[int, Tuple[Edge, ...]]:
    return vertices, tuple(sorted({(min(u, v), max(u, v)) for u, v in edges}))


@lru_cache(maxsize=65536)
def _chromatic(vertices: int, edges: Tuple[Edge, ...]) -> Polynomial:
    if not edges:
        return Polynomial.monomial(vertices)
    if len(edges) == vertices * (vertices - 1) // 2:
        return Polynomial.from_roots(range(vertices))
    u, v = edges[-1]
    deleted = _canonical(vertices, edges[:-1])
    # contract v into u, then close the gap left by v
    merged = []
    for a, b in edges[:-1]:
        a, b = (u if a == v else a), (u if b == v else b)
        if a != b:
            a, b = (a - 1 if a > v else a), (b - 1 if b > v else b)
            merged.append((a, b))
    contracted = _canonical(vertices - 1, merged)
    return _chromatic(*deleted) - _chromatic(*contracted)


def chromatic_polynomial(graph: Graph) -> Polynomial:
    """``P(G, t)`` by memoized deletion-contraction."""
    return _chromatic(*_canonical(graph.n, graph.edges))


def count_colorings(graph: Graph, colours: int) -> int:
    """Proper colourings with ``colours`` colours, by exhaustive search."""
    count = 0
    for colouring in itertools.product(range(colours), repeat=graph.n):
        if all(colouring[u - 1] != colouring[v - 1] for u, v in graph.edges):
            count += 1
    return count


# Edge partitions and increasing forests


@dataclass(frozen=True)
class EdgePartition:
    """``blocks[j - 1]`` holds the edges whose larger endpoint is j."""

    blocks: Tuple[Tuple[Edge, ...], ...]

    @property
    def sizes(self) -> Tuple[int, ...]:
        return tuple(len(block) for block in self.blocks)

    def to_dict(self) -> Dict[str, Any]:
        return {"blocks": [[list(e) for e in block] for block in self.blocks]}


def edge_partition(graph: Graph, ordering: Optional[Sequence[int]] = None) -> EdgePartition:
    relabelled = graph.relabel(ordering) if ordering is not None else graph
    blocks: List[List[Edge]] = [[] for _ in range(graph.n)]
    for i, j in relabelled.edges:
        blocks[j - 1].append((i, j))
    if blocks and blocks[0]:
        raise ConsistencyError("first edge block must be empty")
    return EdgePartition(tuple(tuple(block) for block in blocks))


@lru_cache(maxsize=4096)
def spanning_forests(graph: Graph) -> Tuple[Tuple[Edge, ...], ...]:
    """Every acyclic edge subset, built edge by edge with union-find cycle rejection."""
    edges = graph.edges
    parent = list(range(graph.n + 1))
    chosen: List[Edge] = []
    found: List[Tuple[Edge, ...]] = []

    def find(v: int) -> int:
        while parent[v] != v:
            v = parent[v]
        return v

    def extend(k: int) -> None:
        if k == len(edges):
            found.append(tuple(chosen))
            return
        extend(k + 1)
        u, v = edges[k]
        root_u, root_v = find(u), find(v)
        if root_u != root_v:
            parent[root_u] = root_v
            chosen.append(edges[k])
            extend(k + 1)
            chosen.pop()
            parent[root_u] = root_u

    extend(0)
    logger.debug("graph with %d edges has %d spanning forests", len(edges), len(found))
    return tuple(found)


def is_increasing_forest(n: int, forest: Sequence[Edge], position: Dict[int, int]) -> bool:
    """Along every path from a component's first vertex, positions increase."""
    adjacency: Dict[int, List[int]] = {v: [] for v in range(1, n + 1)}
    for u, v in forest:
        adjacency[u].append(v)
        adjacency[v].append(u)
    visited = set()
    for root in sorted(adjacency, key=position.get):
        if root in visited:
            continue
        visited.add(root)
        queue = deque([root])
        while queue:
            x = queue.popleft()
            for y in adjacency[x]:
                if y in visited:
                    continue
                if position[y] < position[x]:
                    return False
                visited.add(y)
                queue.append(y)
    return True


def count_increasing_forests(graph: Graph, ordering: Optional[Sequence[int]] = None) -> Tuple[int, ...]:
    """``f_k`` for ``k = 0..n-1``: increasing spanning forests with k edges."""
    ordering = ordering if ordering is not None else natural_order(graph.n)
    position = ordering_positions(graph.n, ordering)
    counts = [0] * max(graph.n, 1)
    for forest in spanning_forests(graph):
        if is_increasing_forest(graph.n, forest, position):
            counts[len(forest)] += 1
    return tuple(counts)


def if_polynomial(graph: Graph, ordering: Optional[Sequence[int]] = None) -> Polynomial:
    """``IF(G, t) = sum_k (-1)^k f_k t^(n-k)``."""
    f = count_increasing_forests(graph, ordering)
    coeffs = [0] * (graph.n + 1)
    for k, f_k in enumerate(f):
        if k <= graph.n:
            coeffs[graph.n - k] += (-1) ** k * f_k
    return Polynomial(tuple(coeffs))


def elementary_symmetric(values: Sequence[int]) -> Tuple[int, ...]:
    """``e_0, ..., e_len(values)``."""
    e = [1]
    for v in values:
        e = [a + v * b for a, b in zip(e + [0], [0] + e)]
    return tuple(e)


@dataclass
class IFReport:
    f: Tuple[int, ...]
    e: Tuple[int, ...]
    if_poly: Polynomial
    product: Polynomial
    bijection_ok: bool

    @property
    def counts_match(self) -> bool:
        padded = self.f + (0,) * (len(self.e) - len(self.f))
        return padded == self.e

    @property
    def holds(self) -> bool:
        return self.if_poly == self.product and self.counts_match and self.bijection_ok

    def to_dict(self) -> Dict[str, Any]:
        return {
            "f": list(self.f),
            "e": list(self.e),
            "if_poly": str(self.if_poly),
            "product": str(self.product),
            "counts_match": self.counts_match,
            "bijection_ok": self.bijection_ok,
            "holds": self.holds,
        }


def _transversal_bijection(graph: Graph, ordering: Sequence[int]) -> bool:
    # Edge sets picking at most one edge per block are exactly the increasing forests.
    relabelled = graph.relabel(ordering)
    natural = ordering_positions(graph.n, natural_order(graph.n))
    blocks = edge_partition(relabelled).blocks
    images = set()
    for pick in itertools.product(*[(None,) + block for block in blocks]):
        forest = tuple(sorted(e for e in pick if e is not None))
        if not is_increasing_forest(graph.n, forest, natural):
            return False
        images.add(forest)
    for forest in spanning_forests(relabelled):
        larger = [j for _, j in forest]
        if is_increasing_forest(graph.n, forest, natural):
            if len(set(larger)) != len(larger) or forest not in images:
                return False
    return True


def verify_if_factorization(graph: Graph, ordering: Optional[Sequence[int]] = None) -> IFReport:
    """Compare ``IF(G, t)`` with ``prod(t - |E_i|)`` and ``f_k`` with ``e_k(|E_i|)``."""
    ordering = ordering if ordering is not None else natural_order(graph.n)
    sizes = edge_partition(graph, ordering).sizes
    f = count_increasing_forests(graph, ordering)
    report = IFReport(
        f=f,
        e=elementary_symmetric(sizes),
        if_poly=if_polynomial(graph, ordering),
        product=Polynomial.from_roots(sizes),
        bijection_ok=_transversal_bijection(graph, ordering),
    )
    if not report.holds:
        logger.warning("increasing-forest factorization fails on %s with %s", graph, ordering)
    return report


# Perfect elimination orderings


def is_perfect_elimination(graph: Graph, ordering: Sequence[int]) -> bool:
    """Earlier neighbours of every vertex are pairwise adjacent."""
    position = ordering_positions(graph.n, ordering)
    nx_graph = graph.to_networkx()
    for v in nx_graph.nodes:
        earlier = [u for u in nx_graph.neighbors(v) if position[u] < position[v]]
        for a, b in itertools.combinations(earlier, 2):
            if not nx_graph.has_edge(a, b):
                return False
    return True


def perfect_elimination_orderings(graph: Graph) -> List[Tuple[int, ...]]:
    return [o for o in orderings(graph.n) if is_perfect_elimination(graph, o)]


def whitney_check(graph: Graph) -> bool:
    """``chi(bond lattice) * t^components == P(G, t)``."""
    chi = characteristic_polynomial(bond_lattice(graph))
    return chi.shift(graph.components()) == chromatic_polynomial(graph)


def forest_multichain(lattice: Poset, graph: Graph) -> Multichain:
    """``x_j`` is the join of the edges whose larger endpoint is at most j."""
    blocks = edge_partition(graph).blocks
    elements = [lattice.zero]
    reached: List[int] = []
    for block in blocks:
        reached.extend(edge_atom(lattice, e) for e in block)
        elements.append(join(lattice, reached))
    return Multichain.validated(lattice, elements)


@dataclass
class PEOReport:
    chromatic: Polynomial
    if_poly: Polynomial
    peo: bool
    whitney_ok: Optional[bool] = None
    partition_matches: Optional[bool] = None
    equivalence: Optional[EquivalenceReport] = None
    lattice: Optional[Poset] = field(default=None, repr=False)

    @property
    def equal(self) -> bool:
        return self.chromatic == self.if_poly

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "chromatic": str(self.chromatic),
            "if_poly": str(self.if_poly),
            "equal": self.equal,
            "peo": self.peo,
            "whitney_ok": self.whitney_ok,
            "partition_matches": self.partition_matches,
        }
        if self.equivalence is not None and self.lattice is not None:
            data["equivalence"] = self.equivalence.to_dict(self.lattice)
        return data


def _bond_pipeline(
    relabelled: Graph,
    config: Optional[EngineConfig],
) -> Tuple[Poset, Polynomial, bool, EquivalenceReport]:
    # depends only on the relabelled graph, not on the ordering that produced it
    lattice = bond_lattice(relabelled)
    lifted = characteristic_polynomial(lattice).shift(relabelled.components())
    chain = forest_multichain(lattice, relabelled)
    expected = OrderedAtomPartition.from_blocks(
        lattice, [[edge_atom(lattice, e) for e in block] for block in edge_partition(relabelled).blocks]
    )
    partition_matches = induced_partition(lattice, chain) == expected
    return lattice, lifted, partition_matches, theorem_equivalence_report(lattice, chain, config)


@lru_cache(maxsize=4096)
def _cached_bond_pipeline(relabelled: Graph) -> Tuple[Poset, Polynomial, bool, EquivalenceReport]:
    return _bond_pipeline(relabelled, None)


def verify_chromatic_iff_peo(
    graph: Graph,
    ordering: Optional[Sequence[int]] = None,
    lattice_pipeline: bool = True,
    config: Optional[EngineConfig] = None,
) -> PEOReport:
    """Check ``P(G, t) == IF(G, t)`` exactly when the ordering is a perfect elimination ordering.

    With ``lattice_pipeline`` the bond lattice of the relabelled graph is built
    and the forest multichain is run through the equivalence report.

    Raises:
        ConsistencyError: the biconditional or any pipeline identity fails
    """
    ordering = ordering if ordering is not None else natural_order(graph.n)
    report = PEOReport(
        chromatic=chromatic_polynomial(graph),
        if_poly=if_polynomial(graph, ordering),
        peo=is_perfect_elimination(graph, ordering),
    )
    if report.equal != report.peo:
        raise ConsistencyError(
            f"P == IF is {report.equal} but PEO is {report.peo}",
            witness={"graph": graph.to_dict(), "ordering": list(ordering)},
        )
    if not lattice_pipeline or graph.n == 0:
        return report

    relabelled = graph.relabel(ordering)
    lattice, lifted, partition_matches, equivalence = (
        _cached_bond_pipeline(relabelled) if config is None else _bond_pipeline(relabelled, config)
    )
    report.lattice = lattice
    report.whitney_ok = lifted == report.chromatic
    report.partition_matches = partition_matches
    report.equivalence = equivalence
    if not (report.whitney_ok and report.partition_matches):
        raise ConsistencyError("bond-lattice pipeline disagrees with the graph computation")
    if report.equivalence.cond4_factors.passed != report.equal:
        raise ConsistencyError("lattice factorization disagrees with P == IF")
    return report


# Enumeration and sweeps


def all_graphs(n: int) -> Iterator[Graph]:
    """Every simple graph on ``1..n``."""
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    for mask in range(1 << len(pairs)):
        yield Graph(n, tuple(p for k, p in enumerate(pairs) if mask >> k & 1))


def connected_graphs(n: int) -> Iterator[Graph]:
    return (g for g in all_graphs(n) if g.is_connected())


def orderings(n: int) -> Iterator[Tuple[int, ...]]:
    return itertools.permutations(range(1, n + 1))


def random_connected_graph(rng: random.Random, n: int) -> Graph:
    """Uniform edge subsets of K_n, rejected until connected."""
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    while True:
        graph = Graph(n, tuple(p for p in pairs if rng.random() < 0.5))
        if graph.is_connected():
            return graph


@dataclass
class SweepReport:
    kind: str
    graphs: int = 0
    pairs: int = 0
    positives: int = 0
    counterexample: Optional[Dict[str, Any]] = None

    @property
    def ok(self) -> bool:
        return self.counterexample is None

    def merge(self, other: "SweepReport") -> None:
        self.graphs += other.graphs
        self.pairs += other.pairs
        self.positives += other.positives
        if self.counterexample is None:
            self.counterexample = other.counterexample

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "graphs": self.graphs,
            "pairs": self.pairs,
            "positives": self.positives,
            "counterexample": self.counterexample,
            "ok": self.ok,
        }


def _peo_task(task: Tuple[Graph, List[Tuple[int, ...]], bool]) -> SweepReport:
    graph, orders, lattice_pipeline = task
    summary = SweepReport("peo", graphs=1)
    chordal = nx.is_chordal(graph.to_networkx()) if graph.n else True
    any_peo = False
    if lattice_pipeline and not whitney_check(graph):
        summary.counterexample = {"graph": graph.to_dict(), "error": "whitney"}
        return summary
    for order in orders:
        summary.pairs += 1
        try:
            report = verify_chromatic_iff_peo(graph, order, lattice_pipeline)
        except ConsistencyError as e:
            summary.counterexample = {"graph": graph.to_dict(), "ordering": list(order), "error": str(e)}
            return summary
        if report.peo:
            summary.positives += 1
            any_peo = True
    if len(orders) == math.factorial(graph.n) and any_peo != chordal:
        summary.counterexample = {"graph": graph.to_dict(), "error": "chordality"}
    return summary


def _if_task(task: Tuple[Graph, List[Tuple[int, ...]]]) -> SweepReport:
    graph, orders = task
    summary = SweepReport("if", graphs=1)
    for order in orders:
        summary.pairs += 1
        report = verify_if_factorization(graph, order)
        if not report.holds:
            summary.counterexample = {"graph": graph.to_dict(), "ordering": list(order),
                                      "report": report.to_dict()}
            return summary
        summary.positives += 1
    return summary


def _sampled_tasks(config: SweepConfig, min_vertices: int = 1) -> List[Tuple[Graph, List[Tuple[int, ...]]]]:
    rng = random.Random(config.seed)
    tasks = []
    for _ in range(config.sample_size):
        n = rng.randint(min_vertices, config.max_vertices)
        graph = random_connected_graph(rng, n)
        order = list(range(1, n + 1))
        rng.shuffle(order)
        tasks.append((graph, [tuple(order)]))
    return tasks


def peo_sweep(config: Optional[SweepConfig] = None, lattice_pipeline: bool = False) -> SweepReport:
    """Check the chromatic/forest biconditional over many (graph, ordering) pairs.

    Exhaustive mode covers every graph on up to ``max_vertices`` vertices with
    every ordering; otherwise ``sample_size`` random connected pairs are drawn.
    """
    config = config or SweepConfig()
    if config.exhaustive:
        tasks = [
            (graph, list(orderings(n)), lattice_pipeline)
            for n in range(1, config.max_vertices + 1)
            for graph in all_graphs(n)
        ]
    else:
        tasks = [(g, o, lattice_pipeline) for g, o in _sampled_tasks(config)]
    summary = SweepReport("peo")
    for part in parallel_map(_peo_task, tasks, config.workers):
        summary.merge(part)
    logger.info("peo sweep: %d pairs over %d graphs", summary.pairs, summary.graphs)
    return summary


def if_sweep(config: Optional[SweepConfig] = None) -> SweepReport:
    """Check the increasing-forest factorization on connected graphs."""
    config = config or SweepConfig()
    if config.exhaustive:
        tasks = [
            (graph, list(orderings(n)))
            for n in range(1, config.max_vertices + 1)
            for graph in connected_graphs(n)
        ]
    else:
        tasks = _sampled_tasks(config)
    summary = SweepReport("if")
    for part in parallel_map(_if_task, tasks, config.workers):
        summary.merge(part)
    logger.info("if sweep: %d pairs over %d graphs", summary.pairs, summary.graphs)
    return summary
