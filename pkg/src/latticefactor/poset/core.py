"""Finite ranked posets with a unique minimum, and their Möbius functions.

The order relation is stored as a read-only boolean matrix ``leq`` with
``leq[x, y]`` true iff ``x <= y``; each row is the up-set of an element and
each column its down-set. All derived tables are computed lazily and never
change afterwards.
"""

import itertools
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import (
    Any,
    Collection,
    Dict,
    FrozenSet,
    Iterable,
    List,
    Optional,
    Sequence,
    Tuple,
)

import numpy as np

from ..errors import (
    CycleDetected,
    InvalidElement,
    MultipleMinima,
    NotALattice,
    NotRanked,
    PosetTooLarge,
)
from .polynomial import LaurentPolynomial, Polynomial

logger = logging.getLogger(__name__)

ZERO_LABEL = "0̂"
ONE_LABEL = "1̂"


def _read_only(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


class Poset:
    """Immutable finite ranked poset with a unique minimal element.

    Use :func:`from_cover_relations` to build a poset from untrusted input.
    The constructor itself expects ``leq`` to be a partial order and
    ``covers`` to be exactly its cover relation.

    Attributes:
        size: number of elements; elements are ``range(size)``
        labels: printable name per element
        data: arbitrary payload per element (set partitions, chains, tuples)
        leq: read-only boolean order matrix
        zero: index of the unique minimum
        rank: read-only integer array of ranks
    """

    def __init__(
        self,
        labels: Sequence[str],
        leq: np.ndarray,
        covers: Iterable[Tuple[int, int]],
        data: Optional[Sequence[Any]] = None,
    ):
        self.size = len(labels)
        self.labels: Tuple[str, ...] = tuple(str(label) for label in labels)
        self.data: Tuple[Any, ...] = tuple(data) if data is not None else self.labels
        if len(self.data) != self.size:
            raise InvalidElement("data must have one entry per element")
        if leq.shape != (self.size, self.size):
            raise InvalidElement(f"order matrix has shape {leq.shape}, expected {self.size}")
        self.leq = _read_only(np.array(leq, dtype=bool, copy=True))

        upper: List[List[int]] = [[] for _ in range(self.size)]
        lower: List[List[int]] = [[] for _ in range(self.size)]
        for x, y in sorted(set(covers)):
            upper[x].append(y)
            lower[y].append(x)
        self.upper_covers: Tuple[Tuple[int, ...], ...] = tuple(map(tuple, upper))
        self.lower_covers: Tuple[Tuple[int, ...], ...] = tuple(map(tuple, lower))

        minima = [x for x in range(self.size) if not self.lower_covers[x]]
        if len(minima) != 1:
            raise MultipleMinima(
                f"expected exactly one minimal element, found {len(minima)}",
                witness=[self.labels[x] for x in minima],
            )
        self.zero = minima[0]
        self.rank = _read_only(self._compute_rank())
        self.height = int(self.rank.max()) if self.size else 0

    def _compute_rank(self) -> np.ndarray:
        longest = np.full(self.size, -1, dtype=np.int64)
        shortest = np.full(self.size, -1, dtype=np.int64)
        longest[self.zero] = shortest[self.zero] = 0
        for x in self.topological_order():
            if x == self.zero:
                continue
            below = self.lower_covers[x]
            longest[x] = max(longest[y] for y in below) + 1
            shortest[x] = min(shortest[y] for y in below) + 1
        bad = np.nonzero(longest != shortest)[0]
        if bad.size:
            x = int(bad[0])
            raise NotRanked(
                f"saturated chains from {self.labels[self.zero]} to "
                f"{self.labels[x]} have lengths {shortest[x]}..{longest[x]}",
                witness=self.labels[x],
            )
        return longest

    @classmethod
    def from_leq(
        cls,
        labels: Sequence[str],
        leq: np.ndarray,
        data: Optional[Sequence[Any]] = None,
    ) -> "Poset":
        """Build a poset from a full order relation, computing its covers."""
        leq = np.asarray(leq, dtype=bool)
        size = leq.shape[0]
        if not leq.diagonal().all():
            raise CycleDetected("order relation is not reflexive")
        strict = leq & ~np.eye(size, dtype=bool)
        if (strict & strict.T).any():
            x, y = map(int, np.argwhere(strict & strict.T)[0])
            raise CycleDetected(
                f"{labels[x]} and {labels[y]} lie below each other",
                witness=(labels[x], labels[y]),
            )
        covers = []
        for x in range(size):
            above = strict[x]
            if not above.any():
                continue
            minimal = above & ~strict[above].any(axis=0)
            covers.extend((x, int(y)) for y in np.nonzero(minimal)[0])
        return cls(labels, leq, covers, data)

    # Queries

    def topological_order(self) -> np.ndarray:
        """Elements sorted by the size of their down-sets (a linear extension)."""
        return np.argsort(self.leq.sum(axis=0), kind="stable")

    @property
    def covers(self) -> FrozenSet[Tuple[int, int]]:
        return frozenset((x, y) for x in range(self.size) for y in self.upper_covers[x])

    def le(self, x: int, y: int) -> bool:
        return bool(self.leq[x, y])

    def lt(self, x: int, y: int) -> bool:
        return x != y and bool(self.leq[x, y])

    def covered_by(self, x: int, y: int) -> bool:
        return y in self.upper_covers[x]

    def index(self, label: str) -> int:
        """Return the unique element carrying ``label``."""
        hits = [x for x, name in enumerate(self.labels) if name == label]
        if len(hits) != 1:
            problem = "unknown" if not hits else "ambiguous"
            raise InvalidElement(f"{problem} element label {label!r}", witness=label)
        return hits[0]

    def check_element(self, x: int) -> int:
        if not 0 <= x < self.size:
            raise InvalidElement(f"element {x} is not in a poset of size {self.size}")
        return x

    def up_set(self, x: int) -> np.ndarray:
        return np.nonzero(self.leq[x])[0]

    def down_set(self, x: int) -> np.ndarray:
        return np.nonzero(self.leq[:, x])[0]

    @cached_property
    def top(self) -> Optional[int]:
        """The unique maximum, if there is one."""
        full = np.nonzero(self.leq.all(axis=0))[0]
        return int(full[0]) if full.size else None

    @cached_property
    def mobius(self) -> "MobiusVector":
        return MobiusVector(mobius_of_relation(self.leq, self.zero))

    # Lattice tables

    @cached_property
    def join_table(self) -> np.ndarray:
        """``join_table[x, y]`` is the least upper bound of x and y."""
        return _read_only(self._bound_table(self.leq, self.rank, "join"))

    @cached_property
    def meet_table(self) -> np.ndarray:
        """``meet_table[x, y]`` is the greatest lower bound of x and y."""
        return _read_only(self._bound_table(self.leq.T, -self.rank, "meet"))

    def _bound_table(self, up: np.ndarray, key: np.ndarray, name: str) -> np.ndarray:
        # The least element of an up-set intersection, when it exists, is the
        # unique element of minimal key whose own up-set equals the intersection.
        size = self.size
        table = np.empty((size, size), dtype=np.int64)
        sentinel = int(np.abs(key).max()) + size + 1 if size else 1
        for x in range(size):
            ys = np.arange(x, size)
            common = up[x][None, :] & up[ys]
            keyed = np.where(common, key[None, :], sentinel)
            candidate = keyed.argmin(axis=1)
            found = common[np.arange(ys.size), candidate]
            exact = (up[candidate] == common).all(axis=1)
            failed = np.nonzero(~(found & exact))[0]
            if failed.size:
                y = int(ys[failed[0]])
                raise NotALattice(
                    f"{self.labels[x]} and {self.labels[y]} have no unique {name}",
                    witness=(self.labels[x], self.labels[y]),
                )
            table[x, ys] = candidate
            table[ys, x] = candidate
        logger.debug("built %s table for a poset of size %d", name, size)
        return table

    def __repr__(self) -> str:
        return f"Poset(size={self.size}, height={self.height})"


@dataclass(frozen=True)
class MobiusVector:
    """Values ``mu(0̂, x)`` indexed by element."""

    values: Tuple[int, ...]

    def __getitem__(self, x: int) -> int:
        return self.values[x]

    def __len__(self) -> int:
        return len(self.values)

    def satisfies_recursion(self, poset: Poset) -> bool:
        """Recheck ``sum_{y <= x} mu(y) == delta(0̂, x)`` at every element."""
        mu = np.array(self.values, dtype=object)
        for x in range(poset.size):
            expected = 1 if x == poset.zero else 0
            if sum(mu[poset.leq[:, x]]) != expected:
                return False
        return True

    def to_dict(self, poset: Poset) -> Dict[str, int]:
        return {poset.labels[x]: v for x, v in enumerate(self.values)}


def mobius_of_relation(leq: np.ndarray, zero: int) -> Tuple[int, ...]:
    """Möbius values ``mu(zero, x)`` for an order given as a boolean matrix.

    Arithmetic is carried out on Python integers.
    """
    size = leq.shape[0]
    strictly_below = np.array(leq.T, dtype=bool, copy=True)
    np.fill_diagonal(strictly_below, False)
    mu = np.zeros(size, dtype=object)
    for x in np.argsort(leq.sum(axis=0), kind="stable"):
        if x == zero:
            mu[x] = 1
        elif leq[zero, x]:
            mu[x] = -sum(mu[strictly_below[x]])
    return tuple(int(v) for v in mu)


# Construction


def from_cover_relations(
    labels: Sequence[str],
    covers: Iterable[Tuple[int, int]],
    data: Optional[Sequence[Any]] = None,
    max_size: Optional[int] = None,
) -> Poset:
    """Validate cover pairs and build a ranked poset.

    Redundant pairs (implied by transitivity) are dropped.

    Raises:
        InvalidElement: a pair references an unknown index
        CycleDetected: the pairs contain a directed cycle
        MultipleMinima: there is not exactly one minimal element
        NotRanked: some element has saturated chains of unequal length
        PosetTooLarge: more than ``max_size`` elements
    """
    size = len(labels)
    if max_size is not None and size > max_size:
        raise PosetTooLarge(f"poset has {size} elements, limit is {max_size}")
    pairs = set()
    for x, y in covers:
        x, y = int(x), int(y)
        if not (0 <= x < size and 0 <= y < size):
            raise InvalidElement(f"cover ({x}, {y}) references an unknown element")
        if x == y:
            raise CycleDetected(f"element {labels[x]} covers itself", witness=labels[x])
        pairs.add((x, y))

    successors: List[List[int]] = [[] for _ in range(size)]
    indegree = [0] * size
    for x, y in pairs:
        successors[x].append(y)
        indegree[y] += 1
    queue = [x for x in range(size) if indegree[x] == 0]
    order = []
    while queue:
        x = queue.pop()
        order.append(x)
        for y in successors[x]:
            indegree[y] -= 1
            if indegree[y] == 0:
                queue.append(y)
    if len(order) != size:
        stuck = next(x for x in range(size) if indegree[x] > 0)
        raise CycleDetected("cover relation contains a cycle", witness=labels[stuck])

    leq = np.eye(size, dtype=bool)
    for x in reversed(order):
        for y in successors[x]:
            leq[x] |= leq[y]

    strict = leq & ~np.eye(size, dtype=bool)
    reduced = [(x, y) for x, y in pairs if not (strict[x] & strict[:, y]).any()]
    if len(reduced) != len(pairs):
        logger.debug("dropped %d redundant cover pairs", len(pairs) - len(reduced))
    return Poset(labels, leq, reduced, data)


def chain_poset(length: int, labels: Optional[Sequence[str]] = None) -> Poset:
    """Chain with ``length`` elements."""
    if length < 1:
        raise InvalidElement("a chain needs at least one element")
    names = list(labels) if labels is not None else [ZERO_LABEL] + [str(k) for k in range(1, length)]
    return from_cover_relations(names, [(k, k + 1) for k in range(length - 1)])


def product_of(
    factors: Sequence[Poset],
    labels: Optional[Sequence[str]] = None,
    data: Optional[Sequence[Any]] = None,
    max_size: Optional[int] = None,
) -> Poset:
    """Direct product of posets under the componentwise order.

    Element ``(c_1, ..., c_n)`` has index given by row-major order of the
    coordinates, i.e. the order of ``itertools.product``.
    """
    sizes = [f.size for f in factors]
    total = int(np.prod(sizes, dtype=object)) if sizes else 1
    if max_size is not None and total > max_size:
        raise PosetTooLarge(f"product has {total} elements, limit is {max_size}")
    leq = np.ones((1, 1), dtype=bool)
    for factor in factors:
        a, b = leq.shape[0], factor.size
        leq = (leq[:, None, :, None] & factor.leq[None, :, None, :]).reshape(a * b, a * b)

    strides = [int(np.prod(sizes[k + 1:], dtype=np.int64)) for k in range(len(sizes))]
    coordinates = list(itertools.product(*(range(s) for s in sizes)))
    covers = []
    for index, coord in enumerate(coordinates):
        for k, factor in enumerate(factors):
            for y in factor.upper_covers[coord[k]]:
                covers.append((index, index + (y - coord[k]) * strides[k]))
    if labels is None:
        labels = [
            "(" + ",".join(f.labels[c] for f, c in zip(factors, coord)) + ")"
            for coord in coordinates
        ]
    if data is None:
        data = [tuple(f.data[c] for f, c in zip(factors, coord)) for coord in coordinates]
    logger.debug("built product of %d factors with %d elements", len(factors), total)
    return Poset(labels, leq, covers, data)


def direct_product(p: Poset, q: Poset) -> Poset:
    """``P x Q`` with labels ``(p,q)`` and ranks adding componentwise."""
    return product_of([p, q])


# Operations


def mobius_vector(poset: Poset) -> MobiusVector:
    return poset.mobius


def characteristic_polynomial(poset: Poset) -> Polynomial:
    """``chi(P, t) = sum_x mu(x) t^(rho(P) - rho(x))``."""
    coeffs = [0] * (poset.height + 1)
    for x, value in enumerate(poset.mobius.values):
        coeffs[poset.height - int(poset.rank[x])] += value
    return Polynomial(tuple(coeffs))


def reduced_characteristic(poset: Poset) -> LaurentPolynomial:
    """``sum_x mu(x) t^(-rho(x))``."""
    terms: Dict[int, int] = {}
    for x, value in enumerate(poset.mobius.values):
        exponent = -int(poset.rank[x])
        terms[exponent] = terms.get(exponent, 0) + value
    return LaurentPolynomial.from_terms(terms)


def whitney_numbers(poset: Poset) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """Signed Möbius sums per rank and element counts per rank."""
    first = [0] * (poset.height + 1)
    second = [0] * (poset.height + 1)
    for x, value in enumerate(poset.mobius.values):
        first[int(poset.rank[x])] += value
        second[int(poset.rank[x])] += 1
    return tuple(first), tuple(second)


def is_lattice(poset: Poset) -> bool:
    try:
        poset.join_table
        poset.meet_table
    except NotALattice as e:
        logger.debug("not a lattice: %s", e)
        return False
    return True


def join(poset: Poset, elements: Iterable[int]) -> int:
    """Least upper bound of a set of elements; the empty join is 0̂."""
    table = poset.join_table
    result = poset.zero
    for x in elements:
        result = int(table[result, poset.check_element(x)])
    return result


def meet(poset: Poset, x: int, y: int) -> int:
    return int(poset.meet_table[poset.check_element(x), poset.check_element(y)])


def atoms(poset: Poset) -> FrozenSet[int]:
    return frozenset(int(x) for x in np.nonzero(poset.rank == 1)[0])


def atoms_below(poset: Poset, x: int) -> FrozenSet[int]:
    column = poset.leq[:, poset.check_element(x)]
    return frozenset(int(a) for a in np.nonzero(column & (poset.rank == 1))[0])


def lower_ideal(poset: Poset, elements: Collection[int]) -> FrozenSet[int]:
    """Lower order ideal generated by ``elements``."""
    members = [poset.check_element(x) for x in elements]
    if not members:
        return frozenset()
    mask = poset.leq[:, members].any(axis=1)
    return frozenset(int(y) for y in np.nonzero(mask)[0])


def upper_ideal(poset: Poset, elements: Collection[int]) -> FrozenSet[int]:
    members = [poset.check_element(x) for x in elements]
    if not members:
        return frozenset()
    mask = poset.leq[members].any(axis=0)
    return frozenset(int(y) for y in np.nonzero(mask)[0])


def interval(poset: Poset, x: int, y: int) -> FrozenSet[int]:
    mask = poset.leq[x] & poset.leq[:, y]
    return frozenset(int(z) for z in np.nonzero(mask)[0])


def maximal_elements(poset: Poset, elements: Collection[int]) -> FrozenSet[int]:
    members = sorted(elements)
    return frozenset(
        x for x in members if not any(poset.lt(x, y) for y in members)
    )


def minimal_elements(poset: Poset, elements: Collection[int]) -> FrozenSet[int]:
    members = sorted(elements)
    return frozenset(
        x for x in members if not any(poset.lt(y, x) for y in members)
    )


def is_semimodular(poset: Poset) -> bool:
    """Check that ``x meet y`` covered by ``x`` implies ``y`` covered by ``x join y``.

    Posets that are not lattices are not semimodular.
    """
    rank = poset.rank
    try:
        meets = poset.meet_table
        joins = poset.join_table
    except NotALattice:
        return False
    lower_cover = rank[meets] == rank[:, None] - 1
    upper_cover = rank[joins] == rank[None, :] + 1
    return bool((~lower_cover | upper_cover).all())


def is_atomic(poset: Poset) -> bool:
    """Every element is the join of the atoms below it."""
    for x in range(poset.size):
        if join(poset, atoms_below(poset, x)) != x:
            return False
    return True


def is_geometric(poset: Poset) -> bool:
    return is_semimodular(poset) and is_atomic(poset)


def is_modular(poset: Poset) -> bool:
    """Every pair ``(x, z)`` is a modular pair."""
    joins = poset.join_table
    meets = poset.meet_table
    for x in range(poset.size):
        for z in range(poset.size):
            ys = np.nonzero(poset.leq[:, z])[0]
            lhs = joins[ys, meets[x, z]]
            rhs = meets[joins[ys, x], z]
            if not np.array_equal(lhs, rhs):
                return False
    return True


def rank_of_poset(poset: Poset) -> int:
    """``rho(P)``, the largest rank of an element."""
    return poset.height


def top(poset: Poset) -> Optional[int]:
    return poset.top
