"""Exception hierarchy for latticefactor.

Verdicts ("this condition fails") are reported as data. Exceptions are raised
for malformed input, for operations whose preconditions do not hold, and for
proven identities that fail to hold on a concrete instance.
"""

from typing import Any, Optional


class LatticeFactorError(Exception):
    """Base class for all latticefactor errors."""

    def __init__(self, message: str, witness: Optional[Any] = None):
        super().__init__(message)
        self.witness = witness


class PosetError(LatticeFactorError, ValueError):
    """The input does not describe a valid finite ranked poset with 0̂."""


class CycleDetected(PosetError):
    """The cover relation contains a directed cycle."""


class MultipleMinima(PosetError):
    """The poset has no unique minimal element."""


class NotRanked(PosetError):
    """Saturated chains from 0̂ to some element have unequal lengths."""


class InvalidElement(PosetError):
    """An element index or label does not belong to the poset."""


class PosetTooLarge(PosetError):
    """The requested structure exceeds the configured size budget."""


class InvalidPartition(LatticeFactorError, ValueError):
    """A partition of elements or atoms is malformed."""


class NotALattice(LatticeFactorError):
    """Some pair of elements lacks a unique join or meet."""


class NotHomogeneous(LatticeFactorError):
    """The equivalence relation does not give a homogeneous quotient."""


class HypothesisViolated(LatticeFactorError):
    """A closed-form computation was requested outside its hypotheses."""


class ZeroNotInS(LatticeFactorError, ValueError):
    """A rooted tree was requested over a set that does not contain 0̂."""


class NotGeometric(LatticeFactorError):
    """The operation requires a geometric lattice."""


class InvalidGraph(LatticeFactorError, ValueError):
    """The graph is not simple or references unknown vertices."""


class InputFormatError(LatticeFactorError, ValueError):
    """A JSON document or command-line value could not be parsed."""


class ConsistencyError(LatticeFactorError):
    """Two independent computations of the same quantity disagree."""
