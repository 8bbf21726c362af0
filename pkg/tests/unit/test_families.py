"""Tests for the fixture lattice generators and the family registry."""

import pytest

from latticefactor.errors import InvalidElement, InvalidPartition, PosetTooLarge
from latticefactor.families import (
    SetPartition,
    boolean_lattice,
    chain,
    claw_family,
    create_family,
    get_available_families,
    partition_lattice,
    pi_n_atom_partition,
    pi_n_standard_chain,
    uniform_matroid_lattice,
)
from latticefactor.poset import Polynomial, characteristic_polynomial, is_geometric, is_lattice


class TestSetPartition:
    def test_canonical_form(self):
        part = SetPartition.from_blocks(4, [[4, 3], [2, 1]])
        assert part.blocks == ((1, 2), (3, 4))
        assert part.label == "1,2/3,4"
        assert part.rank == 2

    def test_discrete_label(self):
        assert SetPartition.from_blocks(3, [[1], [2], [3]]).label == "0̂"

    def test_refines_and_merge(self):
        fine = SetPartition.from_blocks(4, [[1, 2], [3], [4]])
        coarse = fine.merge(1, 2)
        assert coarse.label == "1,2/3,4"
        assert fine.refines(coarse)
        assert not coarse.refines(fine)

    @pytest.mark.parametrize("blocks", [[[1, 2]], [[1, 2], [2, 3]], [[1], [], [2, 3]]])
    def test_invalid(self, blocks):
        with pytest.raises(InvalidPartition):
            SetPartition.from_blocks(3, blocks)


class TestPartitionLattice:
    @pytest.mark.parametrize("n, size", [(1, 1), (3, 5), (4, 15), (5, 52)])
    def test_bell_sizes(self, n, size):
        assert partition_lattice(n).size == size

    def test_geometric(self, pi4):
        assert is_lattice(pi4)
        assert is_geometric(pi4)
        assert pi4.height == 3

    def test_long_running_guard(self):
        with pytest.raises(PosetTooLarge):
            partition_lattice(8)

    def test_invalid_n(self):
        with pytest.raises(InvalidElement):
            partition_lattice(0)

    def test_atom_partition(self, pi4, pi4_partition):
        assert pi_n_atom_partition(4, pi4).sizes == (1, 2, 3)
        assert pi4_partition.sizes == (1, 2, 3)

    def test_standard_chain(self, pi4):
        labels = [pi4.labels[x] for x in pi_n_standard_chain(4, pi4)]
        assert labels == ["0̂", "1,2", "1,2,3", "1,2,3,4"]


class TestSmallFamilies:
    def test_boolean(self):
        lattice = boolean_lattice(3)
        assert lattice.size == 8
        assert lattice.labels[0] == "0̂"
        assert lattice.labels[-1] == "1,2,3"

    def test_chain(self):
        assert chain(4).height == 3

    def test_claw(self):
        assert characteristic_polynomial(claw_family(3)) == Polynomial.linear(3)

    def test_uniform(self):
        lattice = uniform_matroid_lattice(4)
        assert lattice.size == 6
        assert is_geometric(lattice)
        assert characteristic_polynomial(lattice) == Polynomial.from_roots([1, 3])
        with pytest.raises(InvalidElement):
            uniform_matroid_lattice(1)


class TestRegistry:
    def test_available(self):
        families = get_available_families()
        assert {"pi-n", "boolean", "hexagon", "chain", "claw", "uniform"} <= set(families)
        families.pop("pi-n")
        assert "pi-n" in get_available_families()

    def test_create(self):
        assert create_family("pi-n", 3).size == 5
        assert create_family("hexagon").size == 6
        assert create_family("boolean", 2).size == 4

    def test_unknown_family(self):
        with pytest.raises(ValueError) as excinfo:
            create_family("x")
        assert "Family 'x' is not available" in str(excinfo.value)

    def test_missing_size(self):
        with pytest.raises(ValueError):
            create_family("chain")

    def test_long_running_forwarded(self):
        with pytest.raises(PosetTooLarge):
            create_family("pi-n", 8)
