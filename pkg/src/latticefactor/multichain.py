"""Atom partitions induced by multichains, modularity of chains and the factorization equivalence.

For a multichain ``0̂ = x_0 <= x_1 <= ... <= x_n = 1̂`` block ``A_i`` holds the
atoms below ``x_i`` but not below ``x_{i-1}``. When every atomic transversal
has support equal to the rank of its join, four statements about the induced
partition coincide: every nonzero element sees exactly one atom of some block,
the same for joins of two atoms of one block, the meet condition, and the
factorization ``chi(L, t) = t^(rho(L) - n) * prod(t - |A_i|)``.
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .config import EngineConfig
from .errors import ConsistencyError, InvalidElement, NotALattice, NotGeometric
from .poset import (
    FactoredForm,
    LaurentPolynomial,
    Poset,
    atoms,
    atoms_below,
    characteristic_polynomial,
    is_geometric,
    is_semimodular,
    join,
)
from .transversal import (
    ConditionResult,
    OrderedAtomPartition,
    _one_block_condition,
    _support_condition,
    atom_counts,
    factor_characteristic,
    transversal_table,
)
from .utils.parallel import parallel_map

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Multichain:
    """Weakly increasing sequence from 0̂ to 1̂; repeats allowed."""

    elements: Tuple[int, ...]

    @classmethod
    def validated(cls, lattice: Poset, elements: Sequence[int]) -> "Multichain":
        """Raises InvalidElement unless ``elements`` is a 0̂–1̂ multichain of ``lattice``."""
        chain = tuple(lattice.check_element(int(x)) for x in elements)
        if len(chain) < 2:
            raise InvalidElement("a multichain needs at least 0̂ and 1̂")
        if chain[0] != lattice.zero or chain[-1] != lattice.top:
            raise InvalidElement(
                f"multichain must run from {lattice.labels[lattice.zero]} to the top",
                witness=[lattice.labels[x] for x in (chain[0], chain[-1])],
            )
        for a, b in zip(chain, chain[1:]):
            if not lattice.le(a, b):
                raise InvalidElement(
                    f"{lattice.labels[a]} is not below {lattice.labels[b]}",
                    witness=(lattice.labels[a], lattice.labels[b]),
                )
        return cls(chain)

    @classmethod
    def from_labels(cls, lattice: Poset, labels: Iterable[str]) -> "Multichain":
        return cls.validated(lattice, [lattice.index(name) for name in labels])

    def __len__(self) -> int:
        return len(self.elements) - 1

    def is_saturated(self, lattice: Poset) -> bool:
        return all(lattice.covered_by(a, b) for a, b in zip(self.elements, self.elements[1:]))

    def labels(self, lattice: Poset) -> List[str]:
        return [lattice.labels[x] for x in self.elements]


def induced_partition(lattice: Poset, chain: Multichain) -> OrderedAtomPartition:
    """Blocks of atoms first reached at each step; empty blocks are kept."""
    atom_list = sorted(atoms(lattice))
    blocks = []
    for lower, upper in zip(chain.elements, chain.elements[1:]):
        blocks.append([
            a for a in atom_list if lattice.leq[a, upper] and not lattice.leq[a, lower]
        ])
    return OrderedAtomPartition.from_blocks(lattice, blocks)


def atomic_elements(lattice: Poset) -> np.ndarray:
    """Mask of elements that are joins of the atoms below them."""
    return np.array(
        [join(lattice, atoms_below(lattice, x)) == x for x in range(lattice.size)], dtype=bool
    )


def meet_condition(lattice: Poset, chain: Multichain) -> ConditionResult:
    """Atomic non-atoms first below ``x_i`` meet ``x_{i-1}`` above 0̂."""
    meets = lattice.meet_table
    atomic = atomic_elements(lattice)
    elements = chain.elements
    for x in np.nonzero(atomic & (lattice.rank >= 2))[0]:
        i = next(k for k in range(1, len(elements)) if lattice.leq[x, elements[k]])
        if meets[x, elements[i - 1]] == lattice.zero:
            return ConditionResult(
                "meet",
                False,
                {"element": lattice.labels[x], "step": i, "below": lattice.labels[elements[i - 1]]},
            )
    return ConditionResult("meet", True)


@lru_cache(maxsize=32)
def modular_pair_table(lattice: Poset) -> np.ndarray:
    """``table[x, z]`` is true when ``(x, z)`` is a modular pair."""
    joins = lattice.join_table
    meets = lattice.meet_table
    leq = lattice.leq
    table = np.empty((lattice.size, lattice.size), dtype=bool)
    for x in range(lattice.size):
        # lhs[y, z] = y v (x ^ z); rhs[y, z] = (y v x) ^ z, compared where y <= z
        lhs = joins[:, meets[x]]
        rhs = meets[joins[:, x]]
        table[x] = (~leq | (lhs == rhs)).all(axis=0)
    table.setflags(write=False)
    return table


def is_modular_pair(lattice: Poset, x: int, z: int) -> bool:
    return bool(modular_pair_table(lattice)[lattice.check_element(x), lattice.check_element(z)])


def left_modular_elements(lattice: Poset) -> np.ndarray:
    return modular_pair_table(lattice).all(axis=1)


def is_left_modular(lattice: Poset, chain: Multichain) -> bool:
    """Every chain element forms a modular pair with every element."""
    mask = left_modular_elements(lattice)
    return bool(mask[list(chain.elements)].all())


def find_left_modular_chain(lattice: Poset) -> Optional[Multichain]:
    """First saturated 0̂–1̂ chain of left-modular elements, smallest indices first.

    Raises:
        NotALattice: the poset has no top or some pair has no join or meet
    """
    top = lattice.top
    if top is None:
        raise NotALattice("poset has no top element")
    allowed = left_modular_elements(lattice)
    dead = np.zeros(lattice.size, dtype=bool)
    path = [lattice.zero]
    stack = [iter(lattice.upper_covers[lattice.zero])]
    if lattice.zero == top:
        return Multichain((top,))
    while stack:
        step = next(stack[-1], None)
        if step is None:
            stack.pop()
            dead[path.pop()] = True
            continue
        if not allowed[step] or dead[step]:
            continue
        path.append(step)
        if step == top:
            logger.debug("left-modular chain: %s", [lattice.labels[x] for x in path])
            return Multichain(tuple(path))
        stack.append(iter(lattice.upper_covers[step]))
    return None


def saturated_chains(lattice: Poset) -> Iterator[Multichain]:
    """All maximal chains from 0̂ to the top, in lexicographic index order."""
    top = lattice.top
    if top is None:
        return

    def extend(path: List[int]) -> Iterator[Multichain]:
        if path[-1] == top:
            yield Multichain(tuple(path))
            return
        for y in lattice.upper_covers[path[-1]]:
            yield from extend(path + [y])

    yield from extend([lattice.zero])


def multichains(lattice: Poset, max_length: int) -> Iterator[Multichain]:
    """All 0̂–1̂ multichains with 1 to ``max_length`` steps."""
    top = lattice.top
    if top is None:
        return
    order = [int(x) for x in lattice.topological_order()]

    def extend(path: List[int], remaining: int) -> Iterator[Tuple[int, ...]]:
        if remaining == 0:
            yield tuple(path)
            return
        for y in order:
            if lattice.leq[path[-1], y]:
                yield from extend(path + [y], remaining - 1)

    for length in range(1, max_length + 1):
        for middle in extend([lattice.zero], length - 1):
            yield Multichain(middle + (top,))


# The four-way equivalence


def _same_block_pairs_condition(lattice: Poset, part: OrderedAtomPartition) -> ConditionResult:
    counts = atom_counts(lattice, part)
    joins = lattice.join_table
    for j, block in enumerate(part.blocks):
        for k, a in enumerate(block):
            for b in block[k + 1:]:
                y = int(joins[a, b])
                if not (counts[:, y] == 1).any():
                    return ConditionResult(
                        "pair_joins",
                        False,
                        {
                            "element": lattice.labels[y],
                            "atoms": [lattice.labels[a], lattice.labels[b]],
                            "block": j + 1,
                        },
                    )
    return ConditionResult("pair_joins", True)


def _factors_as_induced(lattice: Poset, part: OrderedAtomPartition) -> ConditionResult:
    chi = characteristic_polynomial(lattice)
    expected = FactoredForm(lattice.height - len(part), part.sizes)
    if LaurentPolynomial.from_polynomial(chi) == expected.to_laurent():
        return ConditionResult("factors", True)
    return ConditionResult(
        "factors", False, {"chi": str(chi), "product": str(expected.to_laurent())}
    )


@dataclass
class EquivalenceReport:
    """Support hypothesis and the four equivalent conditions for one multichain."""
    support_hypothesis: ConditionResult
    semimodular: bool
    cond1: ConditionResult
    cond2: ConditionResult
    cond3_meet: ConditionResult
    cond4_factors: ConditionResult
    partition: OrderedAtomPartition

    @property
    def flags(self) -> Tuple[bool, bool, bool, bool]:
        return (self.cond1.passed, self.cond2.passed, self.cond3_meet.passed,
                self.cond4_factors.passed)

    @property
    def consistent(self) -> bool:
        return len(set(self.flags)) == 1

    def to_dict(self, lattice: Poset) -> Dict[str, Any]:
        return {
            "partition": self.partition.to_dict(lattice)["blocks"],
            "support_hypothesis": self.support_hypothesis.to_dict(),
            "semimodular": self.semimodular,
            "cond1": self.cond1.to_dict(),
            "cond2": self.cond2.to_dict(),
            "cond3_meet": self.cond3_meet.to_dict(),
            "cond4_factors": self.cond4_factors.to_dict(),
            "consistent": self.consistent,
        }


def theorem_equivalence_report(
    lattice: Poset,
    chain: Multichain,
    config: Optional[EngineConfig] = None,
) -> EquivalenceReport:
    """Evaluate the support hypothesis and all four conditions independently.

    Raises:
        ConsistencyError: the hypothesis holds but the conditions disagree, or
            a semimodular lattice has an atomic transversal of the wrong support
    """
    config = config or EngineConfig()
    part = induced_partition(lattice, chain)
    table = transversal_table(lattice, part, config.transversal_budget)
    semimodular = is_semimodular(lattice)
    report = EquivalenceReport(
        support_hypothesis=_support_condition(lattice, table),
        semimodular=semimodular,
        cond1=_one_block_condition(lattice, part),
        cond2=_same_block_pairs_condition(lattice, part),
        cond3_meet=meet_condition(lattice, chain),
        cond4_factors=_factors_as_induced(lattice, part),
        partition=part,
    )
    if semimodular and not report.support_hypothesis.passed:
        raise ConsistencyError(
            "semimodular lattice has an atomic transversal with the wrong support",
            witness=report.support_hypothesis.witness,
        )
    if report.support_hypothesis.passed and not report.consistent:
        raise ConsistencyError(
            f"conditions disagree under the support hypothesis: {report.flags}",
            witness=chain.labels(lattice),
        )
    if not report.support_hypothesis.passed and not report.consistent:
        logger.warning(
            "conditions disagree without the support hypothesis on %s: %s",
            chain.labels(lattice), report.flags,
        )
    return report


def chain_one_ni_witness(
    lattice: Poset,
    part: OrderedAtomPartition,
    induced: bool = True,
) -> Optional[int]:
    """Smallest-rank nonzero element with no block holding exactly one of its atoms.

    For multichain-induced partitions all of its atoms lie in a single block.
    """
    counts = atom_counts(lattice, part)
    violators = ~(counts == 1).any(axis=0)
    violators[lattice.zero] = False
    candidates = np.nonzero(violators)[0]
    if not candidates.size:
        return None
    x = int(candidates[np.argmin(lattice.rank[candidates])])
    if induced and int((counts[:, x] > 0).sum()) != 1:
        raise ConsistencyError(
            f"minimal violator {lattice.labels[x]} has atoms in several blocks",
            witness=counts[:, x].tolist(),
        )
    return x


def circuit_condition(lattice: Poset, part: OrderedAtomPartition) -> ConditionResult:
    """Every two atoms of a block form a circuit with some atom of an earlier block.

    Raises:
        NotGeometric: the lattice is not geometric
    """
    if not is_geometric(lattice):
        raise NotGeometric("the circuit condition needs a geometric lattice")
    joins = lattice.join_table
    rank = lattice.rank
    for j, block in enumerate(part.blocks):
        earlier = np.array([x for i in range(j) for x in part.blocks[i]], dtype=np.int64)
        for k, y in enumerate(block):
            for z in block[k + 1:]:
                yz = joins[y, z]
                if earlier.size and (rank[joins[earlier, yz]] == 2).any():
                    continue
                return ConditionResult(
                    "circuit",
                    False,
                    {"atoms": [lattice.labels[y], lattice.labels[z]], "block": j + 1},
                )
    return ConditionResult("circuit", True)


def stanley_factorization(
    lattice: Poset,
    config: Optional[EngineConfig] = None,
) -> Optional[FactoredForm]:
    """Factor chi through a saturated left-modular chain, if one exists.

    Raises:
        NotALattice: the poset is not a lattice
    """
    chain = find_left_modular_chain(lattice)
    if chain is None:
        return None
    meet = meet_condition(lattice, chain)
    if not meet.passed:
        raise ConsistencyError(
            "left-modular saturated chain fails the meet condition", witness=meet.witness
        )
    report = factor_characteristic(lattice, induced_partition(lattice, chain), config)
    if report.factored is None:
        logger.warning("left-modular chain found but the factorization hypotheses fail")
        return None
    if report.factored.t_power != 0:
        raise ConsistencyError(f"saturated chain gave t-power {report.factored.t_power}")
    return report.factored


@dataclass
class ConverseReport:
    factors: bool
    left_modular: bool
    circuit: ConditionResult

    @property
    def agree(self) -> bool:
        return not self.factors or (self.left_modular and self.circuit.passed)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "factors": self.factors,
            "left_modular": self.left_modular,
            "circuit": self.circuit.to_dict(),
            "agree": self.agree,
        }


def converse_stanley_check(lattice: Poset, chain: Multichain) -> ConverseReport:
    """On a geometric lattice, factorization through a saturated chain forces left-modularity.

    Raises:
        NotGeometric: the lattice is not geometric
        InvalidElement: the chain is not saturated
    """
    if not is_geometric(lattice):
        raise NotGeometric("the converse check needs a geometric lattice")
    if not chain.is_saturated(lattice):
        raise InvalidElement("the converse check needs a saturated chain",
                             witness=chain.labels(lattice))
    part = induced_partition(lattice, chain)
    report = ConverseReport(
        factors=_factors_as_induced(lattice, part).passed,
        left_modular=is_left_modular(lattice, chain),
        circuit=circuit_condition(lattice, part),
    )
    if not report.agree:
        logger.warning("factorization without left-modularity on %s", chain.labels(lattice))
    return report


# Sweeps


@dataclass
class EquivalenceSweep:
    pairs: int = 0
    with_support: int = 0
    all_true: int = 0
    disagreements_without_support: List[Tuple[str, List[str]]] = field(default_factory=list)

    def merge(self, other: "EquivalenceSweep") -> None:
        self.pairs += other.pairs
        self.with_support += other.with_support
        self.all_true += other.all_true
        self.disagreements_without_support.extend(other.disagreements_without_support)


def _sweep_one(task: Tuple[str, Poset, int, bool, EngineConfig]) -> EquivalenceSweep:
    name, lattice, max_length, saturated_only, config = task
    summary = EquivalenceSweep()
    chains = saturated_chains(lattice) if saturated_only else multichains(lattice, max_length)
    for chain in chains:
        report = theorem_equivalence_report(lattice, chain, config)
        summary.pairs += 1
        if report.support_hypothesis.passed:
            summary.with_support += 1
            summary.all_true += all(report.flags)
        elif not report.consistent:
            summary.disagreements_without_support.append((name, chain.labels(lattice)))
    logger.debug("%s: %d multichains checked", name, summary.pairs)
    return summary


def equivalence_sweep(
    lattices: Iterable[Tuple[str, Poset]],
    max_length: int = 4,
    saturated_only: bool = False,
    workers: int = 1,
    config: Optional[EngineConfig] = None,
) -> EquivalenceSweep:
    """Run the equivalence report over every multichain of every named lattice."""
    config = config or EngineConfig()
    tasks = [(name, lattice, max_length, saturated_only, config) for name, lattice in lattices]
    summary = EquivalenceSweep()
    for part in parallel_map(_sweep_one, tasks, workers):
        summary.merge(part)
    return summary
