"""latticefactor: Möbius functions, characteristic polynomials and their factorizations."""

import logging

logger = logging.getLogger(__name__)

__version__ = "0.1.0"

from .config import Config, load_config
from .errors import LatticeFactorError
from .families import create_family, get_available_families, partition_lattice
from .graph_forest import Graph, bond_lattice, chromatic_polynomial, if_polynomial
from .multichain import Multichain, stanley_factorization, theorem_equivalence_report
from .poset import Polynomial, Poset, characteristic_polynomial, mobius_vector
from .quotient import ElementPartition, quotient_poset, verify_chi_preservation
from .transversal import OrderedAtomPartition, factor_characteristic

__all__ = [
    'Config',
    'load_config',
    'LatticeFactorError',
    'Poset',
    'Polynomial',
    'mobius_vector',
    'characteristic_polynomial',
    'ElementPartition',
    'quotient_poset',
    'verify_chi_preservation',
    'OrderedAtomPartition',
    'factor_characteristic',
    'Multichain',
    'theorem_equivalence_report',
    'stanley_factorization',
    'create_family',
    'get_available_families',
    'partition_lattice',
    'Graph',
    'bond_lattice',
    'chromatic_polynomial',
    'if_polynomial',
]
