"""JSON document formats for posets, partitions, multichains and graphs."""

import json
import logging
from pathlib import Path
from typing import Any, List, Sequence, Tuple, Type, TypeVar, Union

import numpy as np
from pydantic import BaseModel, ValidationError, field_validator

from ..errors import InputFormatError, LatticeFactorError
from ..graph_forest import Graph, ordering_positions
from ..multichain import Multichain
from ..poset import Polynomial, Poset, from_cover_relations
from ..quotient import ElementPartition
from ..transversal import OrderedAtomPartition

logger = logging.getLogger(__name__)

Source = Union[str, Path, dict]
Document = TypeVar("Document", bound=BaseModel)


class PosetDocument(BaseModel):
    labels: List[str]
    covers: List[Tuple[int, int]]

    @field_validator('labels')
    @classmethod
    def validate_labels(cls, v: List[str]) -> List[str]:
        if not v:
            raise ValueError("a poset needs at least one element")
        if len(set(v)) != len(v):
            raise ValueError("labels must be distinct")
        return v

    @classmethod
    def from_poset(cls, poset: Poset) -> "PosetDocument":
        return cls(labels=list(poset.labels), covers=[(int(a), int(b)) for a, b in sorted(poset.covers)])


class PolynomialDocument(BaseModel):
    coeffs: List[int]

    @classmethod
    def from_polynomial(cls, poly: Polynomial) -> "PolynomialDocument":
        return cls(coeffs=list(poly.coeffs))


class ElementPartitionDocument(BaseModel):
    classes: List[List[Union[int, str]]]


class AtomPartitionDocument(BaseModel):
    blocks: List[List[str]]


class MultichainDocument(BaseModel):
    chain: List[str]


class GraphDocument(BaseModel):
    n: int
    edges: List[Tuple[int, int]] = []

    @field_validator('n')
    @classmethod
    def validate_n(cls, v: int) -> int:
        if v < 0:
            raise ValueError("n must be nonnegative")
        return v


def _read(source: Source, model: Type[Document]) -> Document:
    """Parse a path, JSON string or already-decoded dict into ``model``."""
    try:
        if isinstance(source, dict):
            return model.model_validate(source)
        if isinstance(source, Path) or not source.lstrip().startswith("{"):
            with open(source, 'r') as f:
                return model.model_validate(json.load(f))
        return model.model_validate_json(source)
    except ValidationError as e:
        raise InputFormatError(f"invalid {model.__name__}: {e.errors()[0]['msg']}", witness=e.errors()) from e
    except (OSError, json.JSONDecodeError) as e:
        raise InputFormatError(f"cannot read {model.__name__} from {source}: {e}") from e


def _resolve(poset: Poset, label: Union[int, str]) -> int:
    if isinstance(label, int):
        return poset.check_element(label)
    return poset.index(label)


def load_poset(source: Source, max_size: int = 5000) -> Poset:
    """Raises InputFormatError on malformed JSON and PosetError on invalid orders."""
    doc = _read(source, PosetDocument)
    logger.debug("loaded poset document with %d elements", len(doc.labels))
    return from_cover_relations(doc.labels, [tuple(c) for c in doc.covers], max_size=max_size)


def load_polynomial(source: Source) -> Polynomial:
    return Polynomial(tuple(_read(source, PolynomialDocument).coeffs))


def load_element_partition(source: Source, poset: Poset) -> ElementPartition:
    doc = _read(source, ElementPartitionDocument)
    try:
        return ElementPartition.from_classes(
            ([_resolve(poset, x) for x in block] for block in doc.classes), poset.size
        )
    except LatticeFactorError as e:
        raise InputFormatError(str(e), witness=e.witness) from e


def load_atom_partition(source: Source, lattice: Poset) -> OrderedAtomPartition:
    doc = _read(source, AtomPartitionDocument)
    try:
        return OrderedAtomPartition.from_labels(lattice, doc.blocks)
    except LatticeFactorError as e:
        raise InputFormatError(str(e), witness=e.witness) from e


def load_multichain(source: Source, lattice: Poset) -> Multichain:
    doc = _read(source, MultichainDocument)
    try:
        return Multichain.from_labels(lattice, doc.chain)
    except LatticeFactorError as e:
        raise InputFormatError(str(e), witness=e.witness) from e


def load_graph(source: Source) -> Graph:
    doc = _read(source, GraphDocument)
    try:
        return Graph.from_edges(doc.n, doc.edges)
    except LatticeFactorError as e:
        raise InputFormatError(str(e), witness=e.witness) from e


def parse_ordering(text: Union[str, Sequence[int]], n: int) -> Tuple[int, ...]:
    """``"1,3,2"`` or a sequence, checked to be a permutation of ``1..n``."""
    try:
        order = tuple(int(v) for v in (text.split(",") if isinstance(text, str) else text))
        ordering_positions(n, order)
    except (ValueError, LatticeFactorError) as e:
        raise InputFormatError(f"invalid ordering {text!r}: {e}") from e
    return order


def _jsonable(value: Any) -> Any:
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (np.ndarray, frozenset, set)):
        return sorted(value.tolist() if isinstance(value, np.ndarray) else value)
    raise TypeError(f"{type(value).__name__} is not JSON serializable")


def dump_report(report: Any, indent: int = 2, sort_keys: bool = True) -> str:
    """Deterministic JSON for a dict or a pydantic document."""
    if isinstance(report, BaseModel):
        report = report.model_dump()
    return json.dumps(report, indent=indent, sort_keys=sort_keys, ensure_ascii=False,
                      default=_jsonable)
