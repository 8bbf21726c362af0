"""Tests for claws, rooted trees and the transversal factorization."""

import pytest

from latticefactor.config import EngineConfig
from latticefactor.errors import InvalidPartition, PosetTooLarge, ZeroNotInS
from latticefactor.families import chain, pi_n_atom_partition
from latticefactor.poset import FactoredForm, Polynomial, characteristic_polynomial
from latticefactor.transversal import (
    CLAWS,
    TREES,
    OrderedAtomPartition,
    Transversal,
    atom_counts,
    atomic_transversals,
    audit_product_mobius,
    check_atomic_hypotheses,
    check_tree_hypotheses,
    claw,
    factor_characteristic,
    forest_of_transversal,
    lower_ideal_identity,
    product_size,
    rooted_tree,
    search_atom_partitions,
    standard_classes,
    transversal_ideal_matches,
    transversal_product,
    transversal_table,
    tree_size,
    upper_ideal_tree,
)


@pytest.fixture(scope="module")
def pi3_partition(pi3):
    return pi_n_atom_partition(3, pi3)


class TestOrderedAtomPartition:
    def test_from_labels(self, pi3, pi3_partition):
        assert pi3_partition.sizes == (1, 2)
        assert len(pi3_partition) == 2
        assert pi3_partition.to_dict(pi3) == {"blocks": [["1,2"], ["2,3", "1,3"]]}
        assert pi3_partition.block_of(pi3.index("2,3")) == 1

    def test_empty_blocks_allowed(self, hexagon):
        part = OrderedAtomPartition.from_labels(hexagon, [["a"], [], ["b"]])
        assert part.sizes == (1, 0, 1)

    def test_not_an_atom(self, pi3):
        with pytest.raises(InvalidPartition):
            OrderedAtomPartition.from_labels(pi3, [["1,2", "1,2,3"], ["1,3", "2,3"]])

    def test_repeated_atom(self, pi3):
        with pytest.raises(InvalidPartition):
            OrderedAtomPartition.from_labels(pi3, [["1,2", "1,3"], ["1,3", "2,3"]])

    def test_missing_atom(self, pi3):
        with pytest.raises(InvalidPartition) as excinfo:
            OrderedAtomPartition.from_labels(pi3, [["1,2"], ["1,3"]])
        assert excinfo.value.witness == ["2,3"]


class TestFactors:
    def test_claw(self):
        poset = claw(["a", "b", "c"])
        assert poset.size == 4
        assert characteristic_polynomial(poset) == Polynomial.linear(3)

    def test_rooted_tree_of_pi3(self, pi3):
        tree = rooted_tree(pi3, range(pi3.size))
        assert tree.size == 7
        assert tree_size(pi3, range(pi3.size)) == 7
        assert sorted(tree.labels).count("1,2,3") == 3
        assert all(tree.data[k][0] == pi3.zero for k in range(tree.size))

    def test_rooted_tree_needs_zero(self, pi3):
        with pytest.raises(ZeroNotInS):
            rooted_tree(pi3, [pi3.index("1,2")])
        with pytest.raises(ZeroNotInS):
            tree_size(pi3, [pi3.index("1,2")])

    def test_rooted_tree_budget(self, pi4):
        with pytest.raises(PosetTooLarge):
            rooted_tree(pi4, range(pi4.size), max_size=10)

    def test_upper_ideal_tree_is_a_chain(self, pi3):
        tree = upper_ideal_tree(pi3, [pi3.index("1,2")])
        assert tree.size == 3
        assert characteristic_polynomial(tree) == characteristic_polynomial(chain(3))


class TestProducts:
    def test_claw_product(self, pi4, pi4_partition):
        product = transversal_product(pi4, pi4_partition)
        assert product.size == 24
        assert product_size(pi4, pi4_partition, CLAWS) == 24
        assert characteristic_polynomial(product) == characteristic_polynomial(pi4)
        assert audit_product_mobius(product)

    def test_tree_product(self, pi3, pi3_partition):
        product = transversal_product(pi3, pi3_partition, TREES)
        assert product.size == 15
        assert audit_product_mobius(product)

    def test_standard_classes_fibers(self, pi3, pi3_partition):
        classes = standard_classes(pi3, pi3_partition)
        assert len(classes) == pi3.size
        assert sorted(len(block) for block in classes.classes) == [1, 1, 1, 1, 2]

    def test_unknown_mode(self, pi3, pi3_partition):
        with pytest.raises(ValueError):
            transversal_product(pi3, pi3_partition, "stars")

    def test_product_budget(self, pi4, pi4_partition):
        with pytest.raises(PosetTooLarge):
            transversal_product(pi4, pi4_partition, max_size=10)


class TestAtomicTransversals:
    def test_top_of_pi3(self, pi3, pi3_partition):
        found = atomic_transversals(pi3, pi3_partition, pi3.top)
        assert len(found) == 2
        assert all(t.support == 2 for t in found)
        assert {tuple(t.labels(pi3)) for t in found} == {("1,2", "1,3"), ("1,2", "2,3")}

    def test_blockwise_fallback(self, pi3, pi3_partition):
        tiny = EngineConfig(transversal_budget=1)
        found = atomic_transversals(pi3, pi3_partition, pi3.top, tiny)
        assert len(found) == 2

    def test_table_budget(self, pi4, pi4_partition):
        with pytest.raises(PosetTooLarge):
            transversal_table(pi4, pi4_partition, 5)

    def test_atom_counts(self, pi3, pi3_partition):
        counts = atom_counts(pi3, pi3_partition)
        assert counts[:, pi3.top].tolist() == [1, 2]
        assert counts[:, pi3.zero].tolist() == [0, 0]

    def test_transversal_replace(self, pi3):
        t = Transversal((pi3.zero, pi3.zero), pi3.zero)
        assert t.support == 0
        assert t.replace(1, pi3.index("1,3")).support == 1


class TestHypotheses:
    def test_partition_lattice_passes(self, pi4, pi4_partition):
        report = check_atomic_hypotheses(pi4, pi4_partition)
        assert report.passed
        assert [c.name for c in report.conditions] == ["nonempty", "support", "one_block"]

    def test_hexagon_support_fails(self, hexagon):
        part = OrderedAtomPartition.from_labels(hexagon, [["a"], ["b"]])
        report = check_tree_hypotheses(hexagon, part)
        assert not report.passed
        assert not report["support"].passed
        assert report["support"].witness["element"] == "1̂"

    def test_one_block_fails_for_single_block(self, pi3):
        part = OrderedAtomPartition.from_labels(pi3, [["1,2", "1,3", "2,3"]])
        report = check_atomic_hypotheses(pi3, part)
        assert not report["one_block"].passed
        assert report["one_block"].witness["element"] == "1,2,3"

    def test_unknown_condition(self, pi4, pi4_partition):
        with pytest.raises(KeyError):
            check_atomic_hypotheses(pi4, pi4_partition)["missing"]


class TestFactorCharacteristic:
    def test_partition_lattice(self, pi4, pi4_partition):
        report = factor_characteristic(pi4, pi4_partition)
        assert report.mode == CLAWS
        assert report.factored == FactoredForm(0, (1, 2, 3))
        assert report.iso_check is True
        assert all(report.mobius_check.values())
        assert report.product_size == 24
        data = report.to_dict(pi4)
        assert data["factored"] == {"t_power": 0, "roots": [1, 2, 3]}
        assert data["factored_str"] == "(t - 1) (t - 2) (t - 3)"

    def test_join_map_certifies_quotient(self, pi4, pi4_partition, mocker):
        search = mocker.patch("latticefactor.transversal.is_isomorphic")
        report = factor_characteristic(pi4, pi4_partition)
        assert report.iso_check is True
        search.assert_not_called()

    def test_trees_mode(self, pi3, pi3_partition):
        report = factor_characteristic(pi3, pi3_partition, mode=TREES)
        assert report.mode == TREES
        assert report.factored == FactoredForm(0, (1, 2))
        assert report.iso_check is True
        assert report.reduced_check is True

    def test_non_atomic_chain(self):
        lattice = chain(3)
        part = OrderedAtomPartition.from_labels(lattice, [["1"]])
        report = factor_characteristic(lattice, part)
        assert report.mode == TREES
        assert report.factored == FactoredForm(1, (1,))
        assert report.factored.expand() == characteristic_polynomial(lattice)
        assert report.reduced_check is True

    def test_failed_hypotheses(self, hexagon):
        part = OrderedAtomPartition.from_labels(hexagon, [["a"], [], ["b"]])
        report = factor_characteristic(hexagon, part)
        assert not report.factors
        assert report.factored is None
        assert not report.hypotheses.passed

    def test_budget_note(self, pi4, pi4_partition):
        config = EngineConfig(product_budget=10, isomorphism_budget=10)
        report = factor_characteristic(pi4, pi4_partition, config)
        assert report.factors
        assert report.iso_check is None
        assert report.notes


class TestStructuralChecks:
    def test_lower_ideal_identity(self, pi4, pi4_partition):
        for x in range(pi4.size):
            lhs, rhs = lower_ideal_identity(pi4, pi4_partition, x)
            assert lhs == rhs, pi4.labels[x]

    def test_transversal_ideal(self, pi4, pi4_partition):
        assert all(transversal_ideal_matches(pi4, pi4_partition, x) for x in range(pi4.size))

    def test_transversals_of_top_are_spanning_trees(self, pi4, pi4_partition):
        for t in atomic_transversals(pi4, pi4_partition, pi4.top):
            check = forest_of_transversal(pi4, t, 4)
            assert check.is_forest
            assert check.components == 1
            assert check.edges == 3

    def test_search_finds_partition(self, pi3):
        part = search_atom_partitions(pi3)
        assert part is not None
        assert check_tree_hypotheses(pi3, part).passed

    def test_search_on_hexagon_fails(self, hexagon):
        assert search_atom_partitions(hexagon) is None

    def test_search_limit(self, pi4):
        with pytest.raises(PosetTooLarge):
            search_atom_partitions(pi4, max_atoms=3)
