"""Quotients of posets by equivalence relations.

Given an equivalence relation on P, classes are ordered by ``X <= Y`` iff some
``x in X`` lies below some ``y in Y``. The quotient is *homogeneous* when 0̂
forms a class of its own and every element of X lies below some element of Y
whenever ``X <= Y``. Homogeneous quotients are posets; with the summation
condition and rank compatibility they also keep the characteristic polynomial.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, FrozenSet, Hashable, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import (
    ConsistencyError,
    HypothesisViolated,
    InvalidPartition,
    NotHomogeneous,
    NotRanked,
)
from .poset import Poset, Polynomial, characteristic_polynomial, mobius_of_relation

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ElementPartition:
    """Partition of the elements of a poset into classes.

    Classes are ordered by their smallest element, and class ids are positions
    in that order.
    """

    classes: Tuple[FrozenSet[int], ...]
    class_of: Tuple[int, ...]

    @classmethod
    def from_classes(cls, classes: Iterable[Iterable[int]], size: int) -> "ElementPartition":
        blocks = [frozenset(int(x) for x in block) for block in classes]
        if any(not block for block in blocks):
            raise InvalidPartition("classes must be nonempty")
        seen: Dict[int, int] = {}
        for block in blocks:
            for x in block:
                if not 0 <= x < size:
                    raise InvalidPartition(f"element {x} is out of range")
                if x in seen:
                    raise InvalidPartition(f"element {x} appears in two classes", witness=x)
                seen[x] = 1
        if len(seen) != size:
            missing = sorted(set(range(size)) - set(seen))
            raise InvalidPartition("classes do not cover the poset", witness=missing)
        blocks.sort(key=min)
        class_of = [0] * size
        for k, block in enumerate(blocks):
            for x in block:
                class_of[x] = k
        return cls(tuple(blocks), tuple(class_of))

    @classmethod
    def from_keys(cls, keys: Sequence[Hashable]) -> "ElementPartition":
        """Fibers of a key function given as one key per element."""
        fibers: Dict[Hashable, List[int]] = {}
        for x, key in enumerate(keys):
            fibers.setdefault(key, []).append(x)
        return cls.from_classes(fibers.values(), len(keys))

    @classmethod
    def discrete(cls, size: int) -> "ElementPartition":
        return cls.from_classes(([x] for x in range(size)), size)

    @property
    def size(self) -> int:
        return len(self.class_of)

    def __len__(self) -> int:
        return len(self.classes)

    def to_dict(self, poset: Optional[Poset] = None) -> Dict[str, Any]:
        if poset is None:
            return {"classes": [sorted(block) for block in self.classes]}
        return {"classes": [[poset.labels[x] for x in sorted(block)] for block in self.classes]}


@dataclass(frozen=True)
class _ClassTables:
    """Class-level relation matrices for one (poset, partition) pair."""

    order: np.ndarray
    starts: np.ndarray
    reach: np.ndarray       # element x -> class Y: x <= some y in Y
    relation: np.ndarray    # class X -> class Y: some x <= some y
    uniform: np.ndarray     # class X -> class Y: every x <= some y
    ideal: np.ndarray       # class X -> element y: y <= some x in X


def _class_tables(poset: Poset, part: ElementPartition) -> _ClassTables:
    if part.size != poset.size:
        raise InvalidPartition(
            f"partition covers {part.size} elements, poset has {poset.size}"
        )
    order = np.argsort(np.asarray(part.class_of), kind="stable")
    counts = np.bincount(np.asarray(part.class_of), minlength=len(part.classes))
    starts = np.concatenate(([0], np.cumsum(counts)[:-1])).astype(np.int64)
    reach = np.logical_or.reduceat(poset.leq[:, order], starts, axis=1)
    sorted_reach = reach[order]
    relation = np.logical_or.reduceat(sorted_reach, starts, axis=0)
    uniform = np.logical_and.reduceat(sorted_reach, starts, axis=0)
    ideal = np.logical_or.reduceat(poset.leq.T[order], starts, axis=0)
    return _ClassTables(order, starts, reach, relation, uniform, ideal)


def _homogeneity_witness(poset: Poset, part: ElementPartition,
                         tables: _ClassTables) -> Optional[str]:
    zero_class = part.classes[part.class_of[poset.zero]]
    if len(zero_class) != 1:
        others = sorted(poset.labels[x] for x in zero_class if x != poset.zero)
        return f"0̂ shares its class with {', '.join(others)}"
    bad = np.argwhere(tables.relation & ~tables.uniform)
    if bad.size:
        x_class, y_class = map(int, bad[0])
        stray = next(
            x for x in sorted(part.classes[x_class]) if not tables.reach[x, y_class]
        )
        return (
            f"class of {poset.labels[min(part.classes[x_class])]} lies below class of "
            f"{poset.labels[min(part.classes[y_class])]} but {poset.labels[stray]} "
            f"is below no element of it"
        )
    return None


def is_homogeneous(poset: Poset, part: ElementPartition) -> bool:
    """Both clauses of homogeneity, checked over all related class pairs."""
    witness = _homogeneity_witness(poset, part, _class_tables(poset, part))
    if witness:
        logger.debug("not homogeneous: %s", witness)
    return witness is None


def _audit_partial_order(relation: np.ndarray) -> Optional[str]:
    k = relation.shape[0]
    off_diagonal = relation & ~np.eye(k, dtype=bool)
    if (off_diagonal & off_diagonal.T).any():
        return "class relation is not antisymmetric"
    as_float = relation.astype(np.float32)
    composed = (as_float @ as_float) > 0
    if (composed & ~relation).any():
        return "class relation is not transitive"
    return None


def _default_class_label(poset: Poset, block: FrozenSet[int]) -> str:
    names = [poset.labels[x] for x in sorted(block)]
    return names[0] if len(names) == 1 else "{" + "; ".join(names) + "}"


def quotient_poset(
    poset: Poset,
    part: ElementPartition,
    labels: Optional[Sequence[str]] = None,
) -> Poset:
    """The quotient P/~ as a ranked poset.

    Raises:
        NotHomogeneous: the partition does not give a homogeneous quotient
        NotRanked: the quotient is a poset but not ranked
    """
    tables = _class_tables(poset, part)
    witness = _homogeneity_witness(poset, part, tables)
    if witness:
        raise NotHomogeneous(witness, witness=witness)
    problem = _audit_partial_order(tables.relation)
    if problem:
        raise ConsistencyError(f"homogeneous quotient failed its audit: {problem}")
    if labels is None:
        labels = [_default_class_label(poset, block) for block in part.classes]
    data = [tuple(sorted(block)) for block in part.classes]
    return Poset.from_leq(labels, tables.relation, data)


def summation_condition(poset: Poset, part: ElementPartition) -> Dict[int, bool]:
    """For each nonzero class X, whether the Möbius sum over L(X) vanishes."""
    tables = _class_tables(poset, part)
    mu = np.array(poset.mobius.values, dtype=object)
    zero_class = part.class_of[poset.zero]
    return {
        k: sum(mu[tables.ideal[k]]) == 0
        for k in range(len(part.classes))
        if k != zero_class
    }


def rank_compatible(poset: Poset, part: ElementPartition) -> bool:
    """Equivalent elements have equal rank."""
    return all(len({int(poset.rank[x]) for x in block}) == 1 for block in part.classes)


def _covers_lift(poset: Poset, part: ElementPartition, quotient: Poset) -> bool:
    for x_class in range(quotient.size):
        for y_class in quotient.upper_covers[x_class]:
            if not any(
                poset.covered_by(x, y)
                for x in part.classes[x_class]
                for y in part.classes[y_class]
            ):
                return False
    return True


@dataclass
class QuotientReport:
    """Outcome of checking that a quotient keeps the characteristic polynomial."""
    homogeneous: bool
    summation_ok: Dict[int, bool]
    rank_compatible: bool
    chi_original: Polynomial
    quotient: Optional[Poset] = None
    chi_quotient: Optional[Polynomial] = None
    order_audit_ok: Optional[bool] = None
    cover_lift_ok: Optional[bool] = None
    chi_preserved: bool = False
    notes: List[str] = field(default_factory=list)

    @property
    def hypotheses_hold(self) -> bool:
        return self.homogeneous and all(self.summation_ok.values()) and self.rank_compatible

    def to_dict(self, poset: Poset, part: ElementPartition) -> Dict[str, Any]:
        return {
            "homogeneous": self.homogeneous,
            "summation_ok": {
                _default_class_label(poset, part.classes[k]): ok
                for k, ok in sorted(self.summation_ok.items())
            },
            "rank_compatible": self.rank_compatible,
            "order_audit_ok": self.order_audit_ok,
            "cover_lift_ok": self.cover_lift_ok,
            "chi_original": str(self.chi_original),
            "chi_quotient": str(self.chi_quotient) if self.chi_quotient is not None else None,
            "quotient_size": self.quotient.size if self.quotient is not None else None,
            "chi_preserved": self.chi_preserved,
            "notes": list(self.notes),
        }


def verify_chi_preservation(
    poset: Poset,
    part: ElementPartition,
    labels: Optional[Sequence[str]] = None,
) -> QuotientReport:
    """Run the three quotient checks and compare characteristic polynomials."""
    tables = _class_tables(poset, part)
    witness = _homogeneity_witness(poset, part, tables)
    report = QuotientReport(
        homogeneous=witness is None,
        summation_ok=summation_condition(poset, part),
        rank_compatible=rank_compatible(poset, part),
        chi_original=characteristic_polynomial(poset),
    )
    if witness:
        report.notes.append(witness)
        return report

    report.order_audit_ok = _audit_partial_order(tables.relation) is None
    try:
        report.quotient = quotient_poset(poset, part, labels)
    except NotRanked as e:
        report.notes.append(f"quotient is not ranked: {e}")
        return report
    report.cover_lift_ok = _covers_lift(poset, part, report.quotient)
    report.chi_quotient = characteristic_polynomial(report.quotient)

    if report.hypotheses_hold:
        if report.chi_quotient != report.chi_original:
            raise ConsistencyError(
                f"quotient satisfies all hypotheses but chi changed: "
                f"{report.chi_original} vs {report.chi_quotient}"
            )
        if not report.cover_lift_ok:
            raise ConsistencyError("a cover of the quotient does not lift to a cover of P")
        report.chi_preserved = True
    else:
        failed = sorted(k for k, ok in report.summation_ok.items() if not ok)
        if failed:
            report.notes.append(f"summation condition fails on {len(failed)} class(es)")
        if not report.rank_compatible:
            report.notes.append("some class mixes ranks")
    return report


def class_mobius(poset: Poset, part: ElementPartition, class_id: int) -> int:
    """Möbius value of a class in the quotient, from the values in P.

    Non-maximal classes get the sum of their members' values; maximal classes
    additionally subtract the sum over their lower ideal. The result is
    cross-checked against a direct Möbius computation on the class relation.

    Raises:
        HypothesisViolated: the quotient is not homogeneous, or the summation
            condition fails on some nonzero non-maximal class
    """
    tables = _class_tables(poset, part)
    witness = _homogeneity_witness(poset, part, tables)
    if witness:
        raise HypothesisViolated(f"quotient is not homogeneous: {witness}")
    if not 0 <= class_id < len(part.classes):
        raise InvalidPartition(f"unknown class id {class_id}")

    k = len(part.classes)
    strictly_above = tables.relation & ~np.eye(k, dtype=bool)
    maximal = ~strictly_above.any(axis=1)
    zero_class = part.class_of[poset.zero]
    sums = summation_condition(poset, part)
    bad = [c for c, ok in sums.items() if not ok and not maximal[c]]
    if bad:
        raise HypothesisViolated(
            "summation condition fails on a non-maximal class",
            witness=_default_class_label(poset, part.classes[bad[0]]),
        )

    mu = np.array(poset.mobius.values, dtype=object)
    if class_id == zero_class:
        value = 1
    else:
        value = sum(mu[list(part.classes[class_id])])
        if maximal[class_id]:
            value -= sum(mu[tables.ideal[class_id]])
    value = int(value)

    direct = mobius_of_relation(tables.relation, zero_class)[class_id]
    if direct != value:
        raise ConsistencyError(
            f"class Möbius value {value} disagrees with direct computation {direct}"
        )
    return value
