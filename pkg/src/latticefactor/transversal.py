"""Claws, rooted trees and the transversal factorization of characteristic polynomials.

An ordered partition ``(A_1, ..., A_n)`` of the atoms of a lattice L gives a
product of claws (or of rooted trees over the upper ideals of the blocks).
Identifying product elements with equal joins in L collapses the product
onto L; when the support and one-block conditions hold, this collapse keeps
the characteristic polynomial and gives

    chi(L, t) = t^(rho(L) - n) * prod(t - |A_i|).
"""

import itertools
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
from sympy.utilities.iterables import multiset_partitions

from .config import EngineConfig
from .errors import (
    ConsistencyError,
    InvalidPartition,
    PosetTooLarge,
    ZeroNotInS,
)
from .poset import (
    ZERO_LABEL,
    FactoredForm,
    LaurentPolynomial,
    Polynomial,
    Poset,
    atoms,
    characteristic_polynomial,
    from_cover_relations,
    is_atomic,
    is_isomorphic,
    join,
    product_of,
    reduced_characteristic,
    upper_ideal,
    verify_isomorphism,
)
from .quotient import ElementPartition, quotient_poset

logger = logging.getLogger(__name__)

CLAWS = "claws"
TREES = "trees"
MODES = (CLAWS, TREES)

Chain = Tuple[int, ...]


@dataclass(frozen=True)
class OrderedAtomPartition:
    """Ordered blocks of atoms of a lattice. Blocks may be empty."""

    blocks: Tuple[Tuple[int, ...], ...]

    @classmethod
    def from_blocks(cls, lattice: Poset, blocks: Iterable[Iterable[int]]) -> "OrderedAtomPartition":
        """Validate index blocks against the atoms of ``lattice``.

        Raises:
            InvalidPartition: an entry is not an atom, appears twice, or some
                atom is missing
        """
        atom_set = atoms(lattice)
        normalized = []
        seen: Dict[int, int] = {}
        for i, block in enumerate(blocks):
            members = tuple(sorted(int(a) for a in block))
            for a in members:
                if a not in atom_set:
                    label = lattice.labels[a] if 0 <= a < lattice.size else a
                    raise InvalidPartition(f"{label} is not an atom", witness=label)
                if a in seen:
                    raise InvalidPartition(
                        f"atom {lattice.labels[a]} appears in blocks {seen[a] + 1} and {i + 1}",
                        witness=lattice.labels[a],
                    )
                seen[a] = i
            normalized.append(members)
        missing = sorted(atom_set - set(seen))
        if missing:
            raise InvalidPartition(
                "blocks do not cover the atoms",
                witness=[lattice.labels[a] for a in missing],
            )
        return cls(tuple(normalized))

    @classmethod
    def from_labels(cls, lattice: Poset, blocks: Iterable[Iterable[str]]) -> "OrderedAtomPartition":
        return cls.from_blocks(lattice, ([lattice.index(name) for name in block] for block in blocks))

    @property
    def sizes(self) -> Tuple[int, ...]:
        return tuple(len(block) for block in self.blocks)

    def __len__(self) -> int:
        return len(self.blocks)

    def block_of(self, atom: int) -> int:
        for i, block in enumerate(self.blocks):
            if atom in block:
                return i
        raise InvalidPartition(f"element {atom} is in no block")

    def to_dict(self, lattice: Poset) -> Dict[str, List[List[str]]]:
        return {"blocks": [[lattice.labels[a] for a in block] for block in self.blocks]}


@dataclass(frozen=True)
class Transversal:
    """One lattice element per block, each 0̂ or an element of that block's factor."""

    entries: Tuple[int, ...]
    zero: int

    @property
    def support(self) -> int:
        return sum(1 for e in self.entries if e != self.zero)

    def replace(self, i: int, value: int) -> "Transversal":
        entries = list(self.entries)
        entries[i] = value
        return Transversal(tuple(entries), self.zero)

    def labels(self, lattice: Poset) -> List[str]:
        return [lattice.labels[e] for e in self.entries]


@dataclass(frozen=True)
class ProductElement:
    """Payload of an element of a claw or rooted-tree product."""

    chains: Tuple[Chain, ...]
    join: int

    @property
    def entries(self) -> Tuple[int, ...]:
        return tuple(chain[-1] for chain in self.chains)

    @property
    def support(self) -> int:
        return sum(1 for chain in self.chains if len(chain) > 1)

    @property
    def is_atomic(self) -> bool:
        return all(len(chain) <= 2 for chain in self.chains)


# Factors


def claw(atom_labels: Sequence[str], data: Optional[Sequence[Any]] = None) -> Poset:
    """0̂ below ``len(atom_labels)`` pairwise incomparable atoms."""
    labels = [ZERO_LABEL, *atom_labels]
    return from_cover_relations(labels, [(0, k) for k in range(1, len(labels))], data)


def _block_claw(lattice: Poset, block: Sequence[int]) -> Poset:
    zero = lattice.zero
    data = [(zero,)] + [(zero, a) for a in block]
    return claw([lattice.labels[a] for a in block], data)


def rooted_tree(lattice: Poset, elements: Iterable[int], max_size: Optional[int] = None) -> Poset:
    """Saturated chains of ``lattice`` from 0̂ inside ``elements``, ordered by inclusion.

    Each element carries its chain as data and its top element's label.

    Raises:
        ZeroNotInS: 0̂ is not among ``elements``
        PosetTooLarge: the tree would exceed ``max_size`` elements
    """
    members = {lattice.check_element(int(x)) for x in elements}
    if lattice.zero not in members:
        raise ZeroNotInS("a rooted tree needs 0̂ in its element set")
    chains: List[Chain] = [(lattice.zero,)]
    parent = [-1]
    frontier = [0]
    while frontier:
        grown = []
        for k in frontier:
            for y in lattice.upper_covers[chains[k][-1]]:
                if y not in members:
                    continue
                chains.append(chains[k] + (y,))
                parent.append(k)
                grown.append(len(chains) - 1)
            if max_size is not None and len(chains) > max_size:
                raise PosetTooLarge(f"rooted tree exceeds {max_size} elements")
        frontier = grown

    size = len(chains)
    leq = np.zeros((size, size), dtype=bool)
    for k in range(size):
        if parent[k] >= 0:
            leq[:, k] = leq[:, parent[k]]
        leq[k, k] = True
    covers = [(parent[k], k) for k in range(1, size)]
    labels = [lattice.labels[chain[-1]] for chain in chains]
    return Poset(labels, leq, covers, chains)


def tree_size(lattice: Poset, elements: Iterable[int]) -> int:
    """Number of elements :func:`rooted_tree` would build, without building it."""
    members = {int(x) for x in elements}
    if lattice.zero not in members:
        raise ZeroNotInS("a rooted tree needs 0̂ in its element set")
    count = np.zeros(lattice.size, dtype=object)
    for x in lattice.topological_order():
        if x not in members:
            continue
        if x == lattice.zero:
            count[x] = 1
        else:
            count[x] = sum(count[y] for y in lattice.lower_covers[x])
    return int(sum(count))


def _tree_support(lattice: Poset, block: Sequence[int]) -> FrozenSet[int]:
    return upper_ideal(lattice, block) | {lattice.zero}


def upper_ideal_tree(lattice: Poset, block: Sequence[int], max_size: Optional[int] = None) -> Poset:
    """Rooted tree over the upper ideal generated by ``block``, plus 0̂."""
    return rooted_tree(lattice, _tree_support(lattice, block), max_size)


def product_size(lattice: Poset, part: OrderedAtomPartition, mode: str) -> int:
    if mode == CLAWS:
        sizes = [len(block) + 1 for block in part.blocks]
    else:
        sizes = [tree_size(lattice, _tree_support(lattice, block)) for block in part.blocks]
    return int(np.prod(sizes, dtype=object)) if sizes else 1


def transversal_product(
    lattice: Poset,
    part: OrderedAtomPartition,
    mode: str = CLAWS,
    max_size: Optional[int] = None,
) -> Poset:
    """Product of one claw or rooted tree per block.

    Elements are labelled by their join in ``lattice`` and carry a
    :class:`ProductElement`.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {', '.join(MODES)}, got {mode!r}")
    total = product_size(lattice, part, mode)
    if max_size is not None and total > max_size:
        raise PosetTooLarge(f"{mode} product has {total} elements, limit is {max_size}")
    if mode == CLAWS:
        factors = [_block_claw(lattice, block) for block in part.blocks]
    else:
        factors = [upper_ideal_tree(lattice, block) for block in part.blocks]

    data = []
    for coord in itertools.product(*(range(f.size) for f in factors)):
        chains = tuple(f.data[c] for f, c in zip(factors, coord))
        data.append(ProductElement(chains, join(lattice, (chain[-1] for chain in chains))))
    labels = [lattice.labels[d.join] for d in data]
    logger.debug("built %s product with %d elements", mode, len(data))
    return product_of(factors, labels, data)


def standard_classes(
    lattice: Poset,
    part: OrderedAtomPartition,
    mode: str = CLAWS,
    product: Optional[Poset] = None,
) -> ElementPartition:
    """Fibers of the join map on the product."""
    if product is None:
        product = transversal_product(lattice, part, mode)
    return ElementPartition.from_keys([d.join for d in product.data])


# Atomic transversals


@dataclass(frozen=True)
class TransversalTable:
    """All tuples of the claw product with their joins and supports.

    Rows are in ``itertools.product`` order over ``(0̂, *block)`` per block.
    """

    entries: np.ndarray
    joins: np.ndarray
    support: np.ndarray

    def rows_for(self, x: int) -> np.ndarray:
        return np.nonzero(self.joins == x)[0]


@lru_cache(maxsize=32)
def transversal_table(lattice: Poset, part: OrderedAtomPartition, budget: int) -> TransversalTable:
    """Enumerate the claw product once, joining blockwise through the join table.

    Raises:
        PosetTooLarge: the claw product has more than ``budget`` tuples
    """
    zero = lattice.zero
    choices = [np.array((zero, *block), dtype=np.int64) for block in part.blocks]
    total = int(np.prod([c.size for c in choices], dtype=object)) if choices else 1
    if total > budget:
        raise PosetTooLarge(f"claw product has {total} tuples, limit is {budget}")
    if choices:
        grids = np.meshgrid(*choices, indexing="ij")
        entries = np.stack([g.ravel() for g in grids], axis=1)
    else:
        entries = np.empty((1, 0), dtype=np.int64)
    table = lattice.join_table
    joins = np.full(entries.shape[0], zero, dtype=np.int64)
    for column in entries.T:
        joins = table[joins, column]
    support = (entries != zero).sum(axis=1)
    for array in (entries, joins, support):
        array.setflags(write=False)
    logger.debug("transversal table: %d tuples over %d blocks", total, len(choices))
    return TransversalTable(entries, joins, support)


def _blockwise_transversals(lattice: Poset, part: OrderedAtomPartition, x: int) -> List[Transversal]:
    zero = lattice.zero
    below = lattice.leq[:, x]
    choices = [[zero] + [a for a in block if below[a]] for block in part.blocks]
    found = []
    for entries in itertools.product(*choices):
        if join(lattice, entries) == x:
            found.append(Transversal(tuple(entries), zero))
    return found


def atomic_transversals(
    lattice: Poset,
    part: OrderedAtomPartition,
    x: int,
    config: Optional[EngineConfig] = None,
) -> List[Transversal]:
    """Tuples of atoms or 0̂, one per block, whose join is exactly ``x``."""
    config = config or EngineConfig()
    lattice.check_element(x)
    try:
        table = transversal_table(lattice, part, config.transversal_budget)
    except PosetTooLarge:
        logger.info("claw product over budget, enumerating below %s only", lattice.labels[x])
        return _blockwise_transversals(lattice, part, x)
    return [
        Transversal(tuple(int(e) for e in table.entries[r]), lattice.zero)
        for r in table.rows_for(x)
    ]


def atom_counts(lattice: Poset, part: OrderedAtomPartition) -> np.ndarray:
    """``counts[i, x]`` is the number of atoms of block i below x."""
    counts = np.zeros((len(part), lattice.size), dtype=np.int64)
    for i, block in enumerate(part.blocks):
        if block:
            counts[i] = lattice.leq[list(block)].sum(axis=0)
    return counts


# Hypotheses


@dataclass
class ConditionResult:
    name: str
    passed: bool
    witness: Optional[Dict[str, Any]] = None

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "passed": self.passed, "witness": self.witness}


@dataclass
class HypothesisReport:
    conditions: List[ConditionResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.conditions)

    def __getitem__(self, name: str) -> ConditionResult:
        for condition in self.conditions:
            if condition.name == name:
                return condition
        raise KeyError(name)

    def to_dict(self) -> Dict[str, Any]:
        return {"passed": self.passed, "conditions": [c.to_dict() for c in self.conditions]}


def _nonempty_condition(lattice: Poset, table: TransversalTable) -> ConditionResult:
    hit = np.zeros(lattice.size, dtype=bool)
    hit[table.joins] = True
    missing = np.nonzero(~hit)[0]
    if missing.size:
        x = int(missing[0])
        return ConditionResult("nonempty", False, {"element": lattice.labels[x]})
    return ConditionResult("nonempty", True)


def _support_condition(lattice: Poset, table: TransversalTable) -> ConditionResult:
    bad = np.nonzero(lattice.rank[table.joins] != table.support)[0]
    if bad.size:
        r = int(bad[0])
        x = int(table.joins[r])
        return ConditionResult(
            "support",
            False,
            {
                "element": lattice.labels[x],
                "rank": int(lattice.rank[x]),
                "transversal": [lattice.labels[int(e)] for e in table.entries[r]],
                "support": int(table.support[r]),
            },
        )
    return ConditionResult("support", True)


def _one_block_condition(lattice: Poset, part: OrderedAtomPartition) -> ConditionResult:
    counts = atom_counts(lattice, part)
    ok = (counts == 1).any(axis=0)
    ok[lattice.zero] = True
    bad = np.nonzero(~ok)[0]
    if bad.size:
        x = int(bad[np.argmin(lattice.rank[bad])])
        return ConditionResult(
            "one_block",
            False,
            {"element": lattice.labels[x], "atom_counts": counts[:, x].tolist()},
        )
    return ConditionResult("one_block", True)


def check_atomic_hypotheses(
    lattice: Poset,
    part: OrderedAtomPartition,
    config: Optional[EngineConfig] = None,
) -> HypothesisReport:
    """Nonempty transversal sets, correct supports and a one-atom block for every x."""
    config = config or EngineConfig()
    table = transversal_table(lattice, part, config.transversal_budget)
    return HypothesisReport([
        _nonempty_condition(lattice, table),
        _support_condition(lattice, table),
        _one_block_condition(lattice, part),
    ])


def check_tree_hypotheses(
    lattice: Poset,
    part: OrderedAtomPartition,
    config: Optional[EngineConfig] = None,
) -> HypothesisReport:
    """Correct supports and a one-atom block for every nonzero x."""
    config = config or EngineConfig()
    table = transversal_table(lattice, part, config.transversal_budget)
    return HypothesisReport([
        _support_condition(lattice, table),
        _one_block_condition(lattice, part),
    ])


# Factorization


@dataclass
class FactorizationReport:
    """Hypotheses, closed form and the checks run against it."""
    mode: str
    hypotheses: HypothesisReport
    chi: Polynomial
    factored: Optional[FactoredForm] = None
    mobius_check: Dict[int, bool] = field(default_factory=dict)
    iso_check: Optional[bool] = None
    reduced_check: Optional[bool] = None
    product_size: Optional[int] = None
    notes: List[str] = field(default_factory=list)

    @property
    def factors(self) -> bool:
        return self.factored is not None

    def to_dict(self, lattice: Poset) -> Dict[str, Any]:
        return {
            "mode": self.mode,
            "hypotheses": self.hypotheses.to_dict(),
            "chi": str(self.chi),
            "factored": self.factored.to_dict() if self.factored else None,
            "factored_str": str(self.factored) if self.factored else None,
            "mobius_check": {lattice.labels[x]: ok for x, ok in sorted(self.mobius_check.items())},
            "iso_check": self.iso_check,
            "reduced_check": self.reduced_check,
            "product_size": self.product_size,
            "notes": list(self.notes),
        }


def _check_quotient_isomorphism(
    lattice: Poset,
    part: OrderedAtomPartition,
    mode: str,
    config: EngineConfig,
) -> bool:
    product = transversal_product(lattice, part, mode, max_size=config.product_budget)
    classes = standard_classes(lattice, part, mode, product)
    joins = [product.data[min(block)].join for block in classes.classes]
    by_join = sorted(joins) == list(range(lattice.size))
    labels = [lattice.labels[x] for x in joins] if by_join else None
    quotient = quotient_poset(product, classes, labels)
    # each class collapses onto the common join of its tuples
    if by_join and verify_isomorphism(quotient, lattice, dict(enumerate(joins))):
        return True
    if quotient.size > config.isomorphism_budget:
        logger.info("class-to-join map is not an isomorphism; quotient too large to search")
        return False
    return is_isomorphic(quotient, lattice) is not None


def _check_reduced(lattice: Poset, part: OrderedAtomPartition, chi: Polynomial,
                   config: EngineConfig) -> bool:
    product = transversal_product(lattice, part, TREES, max_size=config.product_budget)
    expected = FactoredForm(-len(part), part.sizes).to_laurent()
    lifted = reduced_characteristic(lattice).shift(lattice.height)
    return (
        reduced_characteristic(product) == expected
        and lifted == LaurentPolynomial.from_polynomial(chi)
    )


def factor_characteristic(
    lattice: Poset,
    part: OrderedAtomPartition,
    config: Optional[EngineConfig] = None,
    mode: Optional[str] = None,
) -> FactorizationReport:
    """Check the factorization hypotheses and certify the closed form when they hold.

    Claws are used for atomic lattices and rooted trees otherwise, unless
    ``mode`` says which. Every conclusion is re-derived independently; a
    disagreement under passing hypotheses raises :class:`ConsistencyError`.

    Raises:
        NotALattice: some pair of elements has no join
    """
    config = config or EngineConfig()
    lattice.join_table
    if mode is None:
        mode = CLAWS if is_atomic(lattice) else TREES
    if mode == CLAWS:
        hypotheses = check_atomic_hypotheses(lattice, part, config)
    else:
        hypotheses = check_tree_hypotheses(lattice, part, config)
    chi = characteristic_polynomial(lattice)
    report = FactorizationReport(mode=mode, hypotheses=hypotheses, chi=chi)
    if not hypotheses.passed:
        failed = [c.name for c in hypotheses.conditions if not c.passed]
        logger.warning("factorization hypotheses fail: %s", ", ".join(failed))
        return report

    factored = FactoredForm(lattice.height - len(part), part.sizes)
    if not factored.is_polynomial() or factored.expand() != chi:
        raise ConsistencyError(
            f"hypotheses hold but chi = {chi} differs from {factored}",
            witness=factored.to_dict(),
        )
    report.factored = factored

    table = transversal_table(lattice, part, config.transversal_budget)
    counts = np.bincount(table.joins, minlength=lattice.size)
    for x in range(lattice.size):
        expected = (-1) ** int(lattice.rank[x]) * int(counts[x])
        report.mobius_check[x] = lattice.mobius[x] == expected
    bad = [x for x, ok in report.mobius_check.items() if not ok]
    if bad:
        raise ConsistencyError(
            f"Möbius value of {lattice.labels[bad[0]]} is not the signed transversal count",
            witness=lattice.labels[bad[0]],
        )

    candidates = [CLAWS]
    if mode == TREES:
        # the claw product also collapses onto L when every element has a transversal
        candidates = [TREES]
        if _nonempty_condition(lattice, table).passed:
            candidates.append(CLAWS)
    for candidate in candidates:
        size = product_size(lattice, part, candidate)
        if size <= config.product_budget:
            report.product_size = size
            report.iso_check = _check_quotient_isomorphism(lattice, part, candidate, config)
            if not report.iso_check:
                raise ConsistencyError(f"{candidate} product quotient is not isomorphic to L")
            break
    else:
        report.notes.append("product exceeds budget; isomorphism not checked")
        logger.info("skipping isomorphism check: products exceed %d", config.product_budget)

    if mode == TREES and product_size(lattice, part, TREES) <= config.product_budget:
        report.reduced_check = _check_reduced(lattice, part, chi, config)
        if not report.reduced_check:
            raise ConsistencyError("reduced characteristic of the tree product disagrees")
    return report


# Structural checks


def audit_product_mobius(product: Poset) -> bool:
    """Generic Möbius values on a claw or tree product match the closed forms.

    Tuples of atoms and 0̂ get ``(-1)^support``; anything else gets 0.
    """
    for x, element in enumerate(product.data):
        expected = (-1) ** element.support if element.is_atomic else 0
        if product.mobius[x] != expected:
            logger.warning("product Möbius mismatch at %s", product.labels[x])
            return False
    return True


def lower_ideal_identity(
    lattice: Poset,
    part: OrderedAtomPartition,
    x: int,
    config: Optional[EngineConfig] = None,
) -> Tuple[int, int]:
    """Signed count of claw tuples below x, and ``prod(1 - N_i)`` over blocks with N_i > 0."""
    config = config or EngineConfig()
    table = transversal_table(lattice, part, config.transversal_budget)
    below = lattice.leq[table.entries, x].all(axis=1) if len(part) else np.ones(1, dtype=bool)
    lhs = int(np.where(table.support[below] % 2, -1, 1).sum())
    rhs = 1
    for n_i in atom_counts(lattice, part)[:, x]:
        if n_i:
            rhs *= 1 - int(n_i)
    return lhs, rhs


def transversal_ideal_matches(
    lattice: Poset,
    part: OrderedAtomPartition,
    x: int,
    config: Optional[EngineConfig] = None,
) -> bool:
    """The lower ideal of the transversals of x is every tuple with all entries below x."""
    config = config or EngineConfig()
    table = transversal_table(lattice, part, config.transversal_budget)
    if not len(part):
        return True
    below = np.nonzero(lattice.leq[table.entries, x].all(axis=1))[0]
    generators = table.entries[table.rows_for(x)]
    if not generators.size:
        return below.size == 0
    candidates = table.entries[below]
    zero = lattice.zero
    dominated = (
        (candidates[:, None, :] == generators[None, :, :]) | (candidates[:, None, :] == zero)
    ).all(axis=2).any(axis=1)
    return bool(dominated.all())


@dataclass(frozen=True)
class ForestCheck:
    is_forest: bool
    components: int
    edges: int


def forest_of_transversal(lattice: Poset, transversal: Transversal, n: int) -> ForestCheck:
    """Graph on ``1..n`` with one edge per two-element block among the entries.

    Entries are elements of a partition lattice whose data exposes ``blocks``.
    """
    graph = nx.Graph()
    graph.add_nodes_from(range(1, n + 1))
    for e in transversal.entries:
        if e == transversal.zero:
            continue
        pair = [b for b in lattice.data[e].blocks if len(b) > 1]
        if len(pair) != 1 or len(pair[0]) != 2:
            raise InvalidPartition(f"{lattice.labels[e]} is not an atom of a partition lattice")
        graph.add_edge(*pair[0])
    return ForestCheck(
        nx.is_forest(graph),
        nx.number_connected_components(graph),
        graph.number_of_edges(),
    )


def search_atom_partitions(
    lattice: Poset,
    max_atoms: int = 8,
    config: Optional[EngineConfig] = None,
) -> Optional[OrderedAtomPartition]:
    """First set partition of the atoms meeting the rooted-tree hypotheses.

    Blocks are ordered by their smallest atom; the hypotheses do not depend on
    block order. Brute force, so only small atom sets are accepted.
    """
    config = config or EngineConfig()
    atom_list = sorted(atoms(lattice))
    if len(atom_list) > max_atoms:
        raise PosetTooLarge(f"{len(atom_list)} atoms, search limit is {max_atoms}")
    if not atom_list:
        return OrderedAtomPartition(())
    for blocks in multiset_partitions(atom_list):
        if len(blocks) > lattice.height:
            continue
        part = OrderedAtomPartition.from_blocks(lattice, sorted(blocks, key=min))
        if check_tree_hypotheses(lattice, part, config).passed:
            logger.debug("found atom partition with sizes %s", part.sizes)
            return part
    return None
