"""Whole-pipeline checks on the standard fixture lattices and graph corpora."""

import random
import time

import numpy as np
import pytest

from latticefactor.config import SweepConfig
from latticefactor.families import (
    boolean_lattice,
    counterexample_posets,
    partition_lattice,
    pi_n_atom_partition,
    uniform_matroid_lattice,
)
from latticefactor.graph_forest import (
    all_graphs,
    bond_lattice,
    connected_graphs,
    forest_multichain,
    if_sweep,
    peo_sweep,
    whitney_check,
)
from latticefactor.multichain import (
    converse_stanley_check,
    find_left_modular_chain,
    saturated_chains,
    stanley_factorization,
    theorem_equivalence_report,
)
from latticefactor.poset import (
    FactoredForm,
    Polynomial,
    Poset,
    characteristic_polynomial,
    direct_product,
    from_cover_relations,
    is_isomorphic,
    mobius_of_relation,
    mobius_vector,
    verify_isomorphism,
)
from latticefactor.quotient import ElementPartition, is_homogeneous, verify_chi_preservation
from latticefactor.transversal import (
    OrderedAtomPartition,
    atomic_transversals,
    check_atomic_hypotheses,
    factor_characteristic,
    standard_classes,
    transversal_product,
)

pytestmark = pytest.mark.integration


def _falling_factorial(n):
    return Polynomial.from_roots(range(1, n))


class TestPartitionLatticeFactorization:
    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
    def test_factor(self, n):
        lattice = partition_lattice(n)
        report = factor_characteristic(lattice, pi_n_atom_partition(n, lattice))
        assert report.factored == FactoredForm(0, tuple(range(1, n)))
        assert report.factored.expand() == _falling_factorial(n)
        assert characteristic_polynomial(lattice) == _falling_factorial(n)
        assert all(report.mobius_check.values())

    @pytest.mark.slow
    def test_factor_pi7(self):
        start = time.perf_counter()
        lattice = partition_lattice(7)
        assert lattice.size == 877
        report = factor_characteristic(lattice, pi_n_atom_partition(7, lattice))
        assert report.factored.expand() == characteristic_polynomial(lattice)
        assert report.product_size == 5040
        assert report.iso_check is True
        assert time.perf_counter() - start < 60

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_mobius_counts_transversals(self, n):
        lattice = partition_lattice(n)
        part = pi_n_atom_partition(n, lattice)
        for x in range(lattice.size):
            count = len(atomic_transversals(lattice, part, x))
            assert lattice.mobius[x] == (-1) ** int(lattice.rank[x]) * count

    def test_pi4_rank_two_transversal(self, pi4, pi4_partition):
        found = atomic_transversals(pi4, pi4_partition, pi4.index("1,2/3,4"))
        assert [t.labels(pi4) for t in found] == [["1,2", "0̂", "3,4"]]


class TestQuotientPipeline:
    def test_claw_product_collapses_to_pi3(self, pi3):
        part = pi_n_atom_partition(3, pi3)
        product = transversal_product(pi3, part)
        classes = standard_classes(pi3, part, product=product)
        report = verify_chi_preservation(product, classes)
        assert str(report.chi_quotient) == "t^2 - 3t + 2"
        assert report.chi_preserved

        forward = is_isomorphic(report.quotient, pi3)
        assert forward is not None
        assert verify_isomorphism(report.quotient, pi3, forward)
        backward = {y: x for x, y in forward.items()}
        assert verify_isomorphism(pi3, report.quotient, backward)

    def test_counterexamples_rejected(self):
        for fixture in counterexample_posets():
            assert is_homogeneous(fixture.poset, fixture.partition) is fixture.homogeneous


def _equivalence_corpus():
    for n in range(2, 6):
        lattice = partition_lattice(n)
        for chain in saturated_chains(lattice):
            yield f"pi-{n}", lattice, chain
    for n in range(1, 5):
        lattice = boolean_lattice(n)
        for chain in saturated_chains(lattice):
            yield f"boolean-{n}", lattice, chain
    for n in range(2, 5):
        for graph in connected_graphs(n):
            lattice = bond_lattice(graph)
            yield f"bond-{graph.edges}", lattice, forest_multichain(lattice, graph)


class TestEquivalence:
    def test_corpus(self):
        pairs = 0
        for name, lattice, chain in _equivalence_corpus():
            report = theorem_equivalence_report(lattice, chain)
            assert report.support_hypothesis.passed, name
            assert report.consistent, name
            pairs += 1
        assert pairs >= 200

    @pytest.mark.slow
    def test_bond_lattices_on_five_vertices(self):
        for graph in connected_graphs(5):
            lattice = bond_lattice(graph)
            report = theorem_equivalence_report(lattice, forest_multichain(lattice, graph))
            assert report.consistent, graph.edges


class TestHexagon:
    def test_negative_control(self, hexagon):
        assert characteristic_polynomial(hexagon) == Polynomial((1, 0, -2, 1))
        part = OrderedAtomPartition.from_labels(hexagon, [["a"], ["b"]])
        support = check_atomic_hypotheses(hexagon, part)["support"]
        assert not support.passed
        assert support.witness["transversal"] == ["a", "b"]
        assert support.witness["rank"] == 3
        assert find_left_modular_chain(hexagon) is None


class TestStanley:
    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_partition_lattices(self, n):
        factored = stanley_factorization(partition_lattice(n))
        assert factored == FactoredForm(0, tuple(range(1, n)))

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_boolean_lattices(self, n):
        assert stanley_factorization(boolean_lattice(n)) == FactoredForm(0, (1,) * n)

    @pytest.mark.parametrize(
        "lattice",
        [partition_lattice(4), boolean_lattice(3), uniform_matroid_lattice(4)],
        ids=["pi-4", "boolean-3", "uniform-4"],
    )
    def test_converse(self, lattice):
        for chain in saturated_chains(lattice):
            report = converse_stanley_check(lattice, chain)
            assert report.agree
            if report.factors:
                assert report.left_modular and report.circuit.passed


class TestGraphs:
    def test_if_exhaustive(self):
        report = if_sweep(SweepConfig(exhaustive=True, max_vertices=4))
        assert report.ok, report.counterexample
        assert report.pairs == report.positives

    @pytest.mark.slow
    def test_if_sampled(self):
        report = if_sweep(SweepConfig(sample_size=500, max_vertices=6, seed=0))
        assert report.ok, report.counterexample
        assert report.pairs == 500

    def test_peo_exhaustive_with_lattices(self):
        report = peo_sweep(SweepConfig(exhaustive=True, max_vertices=4), lattice_pipeline=True)
        assert report.ok, report.counterexample

    @pytest.mark.slow
    def test_peo_exhaustive_five_vertices(self):
        start = time.perf_counter()
        report = peo_sweep(SweepConfig(exhaustive=True, max_vertices=5, workers=2), lattice_pipeline=True)
        assert report.ok, report.counterexample
        assert report.graphs == 1 + 2 + 8 + 64 + 1024
        assert report.pairs == 1 + 2 * 2 + 8 * 6 + 64 * 24 + 1024 * 120
        assert time.perf_counter() - start < 600

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_whitney(self, n):
        for graph in all_graphs(n):
            assert whitney_check(graph), graph.edges

    def test_complete_graph_bond_lattice(self):
        graph = next(g for g in connected_graphs(4) if len(g.edges) == 6)
        lattice = bond_lattice(graph)
        assert characteristic_polynomial(lattice) == _falling_factorial(4)
        report = theorem_equivalence_report(lattice, forest_multichain(lattice, graph))
        assert all(report.flags)


def _random_ranked_poset(rng):
    """Single minimum; every later element covers a nonempty subset of the previous rank."""
    labels = ["0"]
    covers = []
    previous = [0]
    for level in range(rng.randint(1, 3)):
        current = []
        for _ in range(rng.randint(1, 3)):
            k = len(labels)
            labels.append(f"{level + 1}.{k}")
            below = rng.sample(previous, rng.randint(1, len(previous)))
            covers.extend((b, k) for b in below)
            current.append(k)
        previous = current
    return labels, covers


class TestPropertyFuzz:
    def test_random_posets(self):
        rng = random.Random(0)
        for _ in range(1000):
            labels, covers = _random_ranked_poset(rng)
            poset = from_cover_relations(labels, covers)
            chi = characteristic_polynomial(poset)

            assert mobius_vector(poset).satisfies_recursion(poset)
            assert mobius_of_relation(poset.leq, poset.zero) == mobius_vector(poset).values

            other = from_cover_relations(*_random_ranked_poset(rng))
            product = direct_product(poset, other)
            assert characteristic_polynomial(product) == chi * characteristic_polynomial(other)

            strict = poset.leq & ~np.eye(poset.size, dtype=bool)
            reduced = from_cover_relations(labels, [tuple(map(int, p)) for p in np.argwhere(strict)])
            again = from_cover_relations(labels, sorted(reduced.covers))
            assert reduced.covers == poset.covers == again.covers
            assert np.array_equal(again.leq, poset.leq)
            assert np.array_equal(again.rank, poset.rank)
            assert Poset.from_leq(labels, poset.leq).covers == poset.covers

            permutation = list(range(poset.size))
            rng.shuffle(permutation)
            shuffled_labels = [None] * poset.size
            for old, new in enumerate(permutation):
                shuffled_labels[new] = labels[old]
            shuffled = from_cover_relations(
                shuffled_labels, [(permutation[a], permutation[b]) for a, b in covers]
            )
            assert is_isomorphic(poset, shuffled) is not None
            assert characteristic_polynomial(shuffled) == chi

            report = verify_chi_preservation(poset, ElementPartition.discrete(poset.size))
            assert report.chi_preserved
