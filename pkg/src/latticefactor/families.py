"""Deterministic generators for the lattices used as fixtures and oracles."""

import itertools
import logging
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Optional, Tuple

import numpy as np
from sympy.utilities.iterables import multiset_partitions

from .errors import InvalidElement, InvalidPartition, PosetTooLarge
from .poset import ONE_LABEL, ZERO_LABEL, Poset, chain_poset, from_cover_relations
from .quotient import ElementPartition
from .transversal import OrderedAtomPartition, claw

logger = logging.getLogger(__name__)

MAX_PARTITION_N = 7


@dataclass(frozen=True, order=True)
class SetPartition:
    """Set partition of ``{1..n}`` with blocks sorted by minimum, elements ascending."""

    n: int
    blocks: Tuple[Tuple[int, ...], ...]

    @classmethod
    def from_blocks(cls, n: int, blocks: Iterable[Iterable[int]]) -> "SetPartition":
        canonical = sorted(tuple(sorted(int(v) for v in block)) for block in blocks)
        flat = [v for block in canonical for v in block]
        if any(not block for block in canonical) or sorted(flat) != list(range(1, n + 1)):
            raise InvalidPartition(f"blocks do not partition 1..{n}", witness=canonical)
        return cls(n, tuple(canonical))

    @property
    def rank(self) -> int:
        return self.n - len(self.blocks)

    def block_ids(self) -> np.ndarray:
        ids = np.empty(self.n, dtype=np.int64)
        for k, block in enumerate(self.blocks):
            ids[[v - 1 for v in block]] = k
        return ids

    def refines(self, other: "SetPartition") -> bool:
        ids = other.block_ids()
        return all(len({int(ids[v - 1]) for v in block}) == 1 for block in self.blocks)

    def merge(self, i: int, j: int) -> "SetPartition":
        rest = [b for k, b in enumerate(self.blocks) if k not in (i, j)]
        return SetPartition.from_blocks(self.n, rest + [self.blocks[i] + self.blocks[j]])

    @property
    def label(self) -> str:
        """Non-singleton blocks as ``1,2/3,4``; the discrete partition is 0̂."""
        big = [block for block in self.blocks if len(block) > 1]
        if not big:
            return ZERO_LABEL
        return "/".join(",".join(str(v) for v in block) for block in big)

    def __str__(self) -> str:
        return self.label


def _same_block_matrix(parts: List[SetPartition], n: int) -> np.ndarray:
    rows = np.empty((len(parts), n * n), dtype=np.float32)
    for k, part in enumerate(parts):
        ids = part.block_ids()
        rows[k] = (ids[:, None] == ids[None, :]).ravel()
    return rows


def refinement_poset(parts: List[SetPartition], n: int) -> Poset:
    """Set partitions of ``1..n`` closed under merging, ordered by refinement.

    Covers are single merges of two blocks; ``parts`` must contain the
    discrete partition and be closed under the merges that define the order.
    """
    parts = sorted(parts, key=lambda p: (p.rank, p.blocks))
    index = {p: k for k, p in enumerate(parts)}
    same = _same_block_matrix(parts, n)
    # p <= q iff every pair together in p is together in q
    leq = (same @ (1.0 - same).T) == 0
    covers = []
    for k, part in enumerate(parts):
        for i, j in itertools.combinations(range(len(part.blocks)), 2):
            merged = index.get(part.merge(i, j))
            if merged is not None:
                covers.append((k, merged))
    labels = [p.label for p in parts]
    return Poset(labels, leq, covers, parts)


def partition_lattice(n: int, long_running: bool = False) -> Poset:
    """All set partitions of ``1..n`` under refinement.

    Raises:
        PosetTooLarge: n exceeds 7 without ``long_running``
    """
    if n < 1:
        raise InvalidElement("partition lattices need n >= 1")
    if n > MAX_PARTITION_N and not long_running:
        raise PosetTooLarge(f"partition lattice of {n} is long-running; pass long_running")
    parts = [
        SetPartition.from_blocks(n, blocks)
        for blocks in multiset_partitions(list(range(1, n + 1)))
    ]
    logger.debug("partition lattice of %d has %d elements", n, len(parts))
    return refinement_poset(parts, n)


def pi_n_atom_partition(n: int, lattice: Optional[Poset] = None) -> OrderedAtomPartition:
    """Atoms ``(i, j+1)`` grouped by their larger entry: block j holds j atoms."""
    lattice = lattice if lattice is not None else partition_lattice(n)
    blocks = [[f"{i},{j}" for i in range(1, j)] for j in range(2, n + 1)]
    return OrderedAtomPartition.from_labels(lattice, blocks)


def pi_n_standard_chain(n: int, lattice: Optional[Poset] = None) -> List[int]:
    """0̂ < 1,2 < 1,2,3 < ... < 1,...,n: merge one new element at a time."""
    lattice = lattice if lattice is not None else partition_lattice(n)
    chain = [lattice.zero]
    for j in range(2, n + 1):
        chain.append(lattice.index(",".join(str(v) for v in range(1, j + 1))))
    return chain


def boolean_lattice(n: int) -> Poset:
    """Subsets of ``1..n`` under inclusion, labelled ``1,3`` (0̂ for the empty set)."""
    if n < 0:
        raise InvalidElement("boolean lattices need n >= 0")
    masks = sorted(range(1 << n), key=lambda m: (bin(m).count("1"), m))
    index = {m: k for k, m in enumerate(masks)}
    values = np.array(masks, dtype=np.int64)
    leq = (values[:, None] & ~values[None, :]) == 0
    covers = [
        (index[m], index[m | (1 << b)])
        for m in masks
        for b in range(n)
        if not m & (1 << b)
    ]
    subsets = [tuple(b + 1 for b in range(n) if m & (1 << b)) for m in masks]
    labels = [",".join(map(str, s)) if s else ZERO_LABEL for s in subsets]
    return Poset(labels, leq, covers, subsets)


def hexagon_lattice() -> Poset:
    """Two chains 0̂ < a < c < 1̂ and 0̂ < b < d < 1̂; ranked but not semimodular."""
    labels = [ZERO_LABEL, "a", "b", "c", "d", ONE_LABEL]
    return from_cover_relations(labels, [(0, 1), (0, 2), (1, 3), (2, 4), (3, 5), (4, 5)])


def chain(k: int) -> Poset:
    """Chain with ``k`` elements."""
    return chain_poset(k)


def claw_family(k: int) -> Poset:
    return claw([str(i) for i in range(1, k + 1)])


def uniform_matroid_lattice(n: int) -> Poset:
    """Flats of the rank-2 uniform matroid on n points: 0̂, n atoms, 1̂."""
    if n < 2:
        raise InvalidElement("rank-2 uniform matroids need at least 2 points")
    labels = [ZERO_LABEL, *(str(i) for i in range(1, n + 1)), ONE_LABEL]
    covers = [(0, i) for i in range(1, n + 1)] + [(i, n + 1) for i in range(1, n + 1)]
    return from_cover_relations(labels, covers)


@dataclass(frozen=True)
class QuotientFixture:
    name: str
    poset: Poset
    partition: ElementPartition
    homogeneous: bool


def two_chains_poset() -> Poset:
    """0̂ < x < y and 0̂ < w < z with no other relations."""
    return from_cover_relations([ZERO_LABEL, "x", "y", "w", "z"], [(0, 1), (1, 2), (0, 3), (3, 4)])


def counterexample_posets() -> List[QuotientFixture]:
    """Equivalence relations on two chains that break antisymmetry or transitivity."""
    poset = two_chains_poset()

    def classes(*groups: Iterable[str]) -> ElementPartition:
        return ElementPartition.from_classes(
            ([poset.index(name) for name in group] for group in groups), poset.size
        )

    return [
        QuotientFixture(
            "antisymmetry", poset, classes(["w", "x"], [ZERO_LABEL, "y", "z"]), False
        ),
        QuotientFixture(
            "transitivity", poset, classes([ZERO_LABEL], ["x"], ["w", "y"], ["z"]), False
        ),
        QuotientFixture("identity", poset, ElementPartition.discrete(poset.size), True),
    ]


# Family registry

FAMILIES: Dict[str, Callable[..., Poset]] = {
    "pi-n": partition_lattice,
    "boolean": boolean_lattice,
    "hexagon": hexagon_lattice,
    "chain": chain,
    "claw": claw_family,
    "uniform": uniform_matroid_lattice,
}

PARAMETERLESS = frozenset({"hexagon"})


def create_family(name: str, n: Optional[int] = None, long_running: bool = False) -> Poset:
    """Build a fixture lattice by registry name.

    Raises:
        ValueError: unknown family, or a missing size parameter
    """
    if name not in FAMILIES:
        available = ", ".join(sorted(FAMILIES))
        raise ValueError(f"Family '{name}' is not available. Available families: {available}")
    generator = FAMILIES[name]
    if name in PARAMETERLESS:
        return generator()
    if n is None:
        raise ValueError(f"family '{name}' needs a size parameter")
    if name == "pi-n":
        return generator(n, long_running=long_running)
    return generator(n)


def get_available_families() -> Dict[str, Callable[..., Poset]]:
    return FAMILIES.copy()
