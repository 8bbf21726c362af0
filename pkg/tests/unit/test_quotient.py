"""Tests for quotients of posets by equivalence relations."""

import pytest

from latticefactor.errors import HypothesisViolated, InvalidPartition, NotHomogeneous
from latticefactor.families import counterexample_posets, pi_n_atom_partition
from latticefactor.poset import Polynomial, characteristic_polynomial, is_isomorphic
from latticefactor.quotient import (
    ElementPartition,
    class_mobius,
    is_homogeneous,
    quotient_poset,
    rank_compatible,
    summation_condition,
    verify_chi_preservation,
)
from latticefactor.transversal import standard_classes, transversal_product


def _classes(poset, *groups):
    return ElementPartition.from_classes(
        ([poset.index(name) for name in group] for group in groups), poset.size
    )


@pytest.fixture
def claw_quotient(pi3):
    """Product of the claws for ({12}, {13, 23}) and its join classes."""
    part = pi_n_atom_partition(3, pi3)
    product = transversal_product(pi3, part)
    return product, standard_classes(pi3, part, product=product)


class TestElementPartition:
    def test_classes_sorted_by_smallest_element(self):
        part = ElementPartition.from_classes([[3, 1], [0], [2]], 4)
        assert part.classes == (frozenset({0}), frozenset({1, 3}), frozenset({2}))
        assert part.class_of == (0, 1, 2, 1)
        assert len(part) == 3
        assert part.size == 4

    def test_from_keys(self):
        part = ElementPartition.from_keys(["a", "b", "a", "c"])
        assert part.classes == (frozenset({0, 2}), frozenset({1}), frozenset({3}))

    @pytest.mark.parametrize(
        "classes",
        [
            [[0, 1], [1, 2]],   # overlap
            [[0], [1]],         # missing element
            [[0, 1, 2], []],    # empty class
            [[0, 1, 5]],        # out of range
        ],
    )
    def test_invalid(self, classes):
        with pytest.raises(InvalidPartition):
            ElementPartition.from_classes(classes, 3)

    def test_to_dict(self, two_chains):
        part = _classes(two_chains, ["0̂"], ["x", "w"], ["y", "z"])
        assert part.to_dict(two_chains) == {"classes": [["0̂"], ["x", "w"], ["y", "z"]]}
        assert part.to_dict() == {"classes": [[0], [1, 3], [2, 4]]}


class TestHomogeneity:
    def test_counterexample_fixtures(self):
        for fixture in counterexample_posets():
            assert is_homogeneous(fixture.poset, fixture.partition) is fixture.homogeneous, fixture.name

    def test_non_homogeneous_quotient_raises(self):
        for fixture in counterexample_posets():
            if fixture.homogeneous:
                continue
            with pytest.raises(NotHomogeneous):
                quotient_poset(fixture.poset, fixture.partition)
            report = verify_chi_preservation(fixture.poset, fixture.partition)
            assert not report.homogeneous
            assert report.quotient is None
            assert report.notes

    def test_zero_must_be_alone(self, two_chains):
        part = _classes(two_chains, ["0̂", "x"], ["y"], ["w"], ["z"])
        assert not is_homogeneous(two_chains, part)


class TestChiPreservation:
    def test_discrete_partition(self, pi3):
        report = verify_chi_preservation(pi3, ElementPartition.discrete(pi3.size))
        assert report.hypotheses_hold
        assert report.chi_preserved
        assert report.order_audit_ok
        assert report.cover_lift_ok
        assert report.quotient.size == pi3.size

    def test_claw_product_collapses_onto_pi3(self, pi3, claw_quotient):
        product, classes = claw_quotient
        assert product.size == 6
        assert characteristic_polynomial(product) == Polynomial.from_roots([1, 2])

        report = verify_chi_preservation(product, classes)
        assert report.homogeneous
        assert all(report.summation_ok.values())
        assert report.rank_compatible
        assert report.chi_preserved
        assert report.chi_quotient == characteristic_polynomial(pi3)
        assert is_isomorphic(report.quotient, pi3) is not None

    def test_summation_failure_changes_chi(self, two_chains):
        part = _classes(two_chains, ["0̂"], ["x"], ["w"], ["y", "z"])
        report = verify_chi_preservation(two_chains, part)
        assert report.homogeneous
        assert report.rank_compatible
        assert summation_condition(two_chains, part) == {1: True, 2: False, 3: True}
        assert not report.chi_preserved
        assert report.chi_original == Polynomial((0, -2, 1))
        assert report.chi_quotient == Polynomial((1, -2, 1))

    def test_rank_compatibility(self, two_chains):
        assert rank_compatible(two_chains, _classes(two_chains, ["0̂"], ["x", "w"], ["y", "z"]))
        assert not rank_compatible(two_chains, _classes(two_chains, ["0̂"], ["x", "z"], ["w"], ["y"]))

    def test_report_to_dict(self, claw_quotient):
        product, classes = claw_quotient
        data = verify_chi_preservation(product, classes).to_dict(product, classes)
        assert data["chi_preserved"] is True
        assert data["chi_quotient"] == "t^2 - 3t + 2"
        assert data["quotient_size"] == 5


class TestClassMobius:
    def test_values_match_quotient(self, pi3, claw_quotient):
        product, classes = claw_quotient
        quotient = quotient_poset(product, classes)
        for k in range(len(classes)):
            assert class_mobius(product, classes, k) == quotient.mobius[k]

    def test_top_class(self, claw_quotient):
        product, classes = claw_quotient
        top_class = classes.class_of[product.size - 1]
        assert class_mobius(product, classes, top_class) == 2

    def test_non_homogeneous(self):
        fixture = next(f for f in counterexample_posets() if not f.homogeneous)
        with pytest.raises(HypothesisViolated):
            class_mobius(fixture.poset, fixture.partition, 0)

    def test_unknown_class(self, pi3):
        with pytest.raises(InvalidPartition):
            class_mobius(pi3, ElementPartition.discrete(pi3.size), 99)
