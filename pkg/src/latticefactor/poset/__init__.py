"""Finite ranked posets, Möbius functions and characteristic polynomials."""

from .core import (
    ONE_LABEL,
    ZERO_LABEL,
    MobiusVector,
    Poset,
    atoms,
    atoms_below,
    chain_poset,
    characteristic_polynomial,
    direct_product,
    from_cover_relations,
    interval,
    is_atomic,
    is_geometric,
    is_lattice,
    is_modular,
    is_semimodular,
    join,
    lower_ideal,
    maximal_elements,
    meet,
    minimal_elements,
    mobius_of_relation,
    mobius_vector,
    product_of,
    rank_of_poset,
    reduced_characteristic,
    top,
    upper_ideal,
    whitney_numbers,
)
from .isomorphism import is_isomorphic, verify_isomorphism
from .polynomial import (
    FactoredForm,
    LaurentPolynomial,
    Polynomial,
    nonnegative_integer_factorization,
)

__all__ = [
    "ONE_LABEL",
    "ZERO_LABEL",
    "FactoredForm",
    "LaurentPolynomial",
    "MobiusVector",
    "Polynomial",
    "Poset",
    "atoms",
    "atoms_below",
    "chain_poset",
    "characteristic_polynomial",
    "direct_product",
    "from_cover_relations",
    "interval",
    "is_atomic",
    "is_geometric",
    "is_isomorphic",
    "is_lattice",
    "is_modular",
    "is_semimodular",
    "join",
    "lower_ideal",
    "maximal_elements",
    "meet",
    "minimal_elements",
    "mobius_of_relation",
    "mobius_vector",
    "nonnegative_integer_factorization",
    "product_of",
    "rank_of_poset",
    "reduced_characteristic",
    "top",
    "upper_ideal",
    "verify_isomorphism",
    "whitney_numbers",
]
