"""Exact integer polynomials in t, factored forms and Laurent polynomials."""

import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import sympy

logger = logging.getLogger(__name__)

T = sympy.Symbol("t")


def _strip(coeffs: Iterable[int]) -> Tuple[int, ...]:
    values = [int(c) for c in coeffs]
    while values and values[-1] == 0:
        values.pop()
    return tuple(values)


@dataclass(frozen=True)
class Polynomial:
    """Univariate polynomial with integer coefficients.

    ``coeffs[k]`` is the coefficient of ``t^k``. The zero polynomial has no
    coefficients.
    """

    coeffs: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _strip(self.coeffs))

    @classmethod
    def constant(cls, value: int) -> "Polynomial":
        return cls((value,))

    @classmethod
    def monomial(cls, degree: int, coefficient: int = 1) -> "Polynomial":
        if degree < 0:
            raise ValueError("monomial degree must be nonnegative")
        return cls((0,) * degree + (coefficient,))

    @classmethod
    def linear(cls, root: int) -> "Polynomial":
        """Return ``t - root``."""
        return cls((-root, 1))

    @classmethod
    def from_roots(cls, roots: Iterable[int], t_power: int = 0) -> "Polynomial":
        result = cls.monomial(t_power)
        for root in roots:
            result = result * cls.linear(root)
        return result

    @classmethod
    def from_dict(cls, data: Dict[str, Sequence[int]]) -> "Polynomial":
        return cls(tuple(data["coeffs"]))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading_coefficient(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, k: int) -> int:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def __add__(self, other: Union["Polynomial", int]) -> "Polynomial":
        other = _coerce(other)
        size = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(
            tuple(self.coefficient(k) + other.coefficient(k) for k in range(size))
        )

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial(tuple(-c for c in self.coeffs))

    def __sub__(self, other: Union["Polynomial", int]) -> "Polynomial":
        return self + (-_coerce(other))

    def __rsub__(self, other: int) -> "Polynomial":
        return _coerce(other) - self

    def __mul__(self, other: Union["Polynomial", int]) -> "Polynomial":
        other = _coerce(other)
        if self.is_zero() or other.is_zero():
            return Polynomial()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Polynomial(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "Polynomial":
        if exponent < 0:
            raise ValueError("negative exponent")
        result = Polynomial.constant(1)
        for _ in range(exponent):
            result = result * self
        return result

    def __call__(self, value: int) -> int:
        """Evaluate at an integer point (Horner's rule)."""
        result = 0
        for c in reversed(self.coeffs):
            result = result * value + c
        return result

    def shift(self, k: int) -> "Polynomial":
        """Multiply by ``t^k``; negative ``k`` requires divisibility by ``t^-k``."""
        if k >= 0:
            return Polynomial((0,) * k + self.coeffs)
        if any(self.coefficient(i) for i in range(-k)):
            raise ValueError(f"polynomial is not divisible by t^{-k}")
        return Polynomial(self.coeffs[-k:])

    def lowest_degree(self) -> int:
        """Exponent of the largest power of t dividing the polynomial."""
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        return 0

    def to_sympy(self) -> sympy.Poly:
        return sympy.Poly(list(reversed(self.coeffs)) or [0], T, domain="ZZ")

    def to_dict(self) -> Dict[str, List[int]]:
        return {"coeffs": list(self.coeffs)}

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            magnitude = abs(c)
            if k == 0:
                body = str(magnitude)
            else:
                power = "t" if k == 1 else f"t^{k}"
                body = power if magnitude == 1 else f"{magnitude}{power}"
            if not terms:
                terms.append(f"-{body}" if c < 0 else body)
            else:
                terms.append(f"- {body}" if c < 0 else f"+ {body}")
        return " ".join(terms)


def _coerce(value: Union[Polynomial, int]) -> Polynomial:
    if isinstance(value, Polynomial):
        return value
    return Polynomial.constant(int(value))


@dataclass(frozen=True)
class LaurentPolynomial:
    """``t^offset * body`` with ``body`` not divisible by t (or zero)."""

    offset: int = 0
    body: Polynomial = Polynomial()

    def __post_init__(self):
        if self.body.is_zero():
            object.__setattr__(self, "offset", 0)
            return
        low = self.body.lowest_degree()
        if low:
            object.__setattr__(self, "offset", self.offset + low)
            object.__setattr__(self, "body", self.body.shift(-low))

    @classmethod
    def from_polynomial(cls, poly: Polynomial) -> "LaurentPolynomial":
        return cls(0, poly)

    @classmethod
    def from_terms(cls, terms: Dict[int, int]) -> "LaurentPolynomial":
        """Build from ``{exponent: coefficient}`` with possibly negative exponents."""
        nonzero = {e: c for e, c in terms.items() if c}
        if not nonzero:
            return cls()
        low = min(nonzero)
        coeffs = [0] * (max(nonzero) - low + 1)
        for e, c in nonzero.items():
            coeffs[e - low] += c
        return cls(low, Polynomial(tuple(coeffs)))

    def __mul__(self, other: "LaurentPolynomial") -> "LaurentPolynomial":
        return LaurentPolynomial(self.offset + other.offset, self.body * other.body)

    def shift(self, k: int) -> "LaurentPolynomial":
        return LaurentPolynomial(self.offset + k, self.body)

    def is_polynomial(self) -> bool:
        return self.offset >= 0 or self.body.is_zero()

    def to_polynomial(self) -> Polynomial:
        if not self.is_polynomial():
            raise ValueError(f"{self} has negative powers of t")
        return self.body.shift(self.offset)

    def terms(self) -> Dict[int, int]:
        return {k + self.offset: c for k, c in enumerate(self.body.coeffs) if c}

    def __str__(self) -> str:
        if self.offset == 0:
            return str(self.body)
        power = "t" if self.offset == 1 else f"t^{self.offset}"
        return f"{power}({self.body})"


@dataclass(frozen=True)
class FactoredForm:
    """``t^t_power * prod(t - r)`` over ``linear_roots``.

    ``t_power`` may be negative as long as enough roots are zero for the
    expansion to be a polynomial.
    """

    t_power: int
    linear_roots: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "linear_roots", tuple(int(r) for r in self.linear_roots))
        if any(r < 0 for r in self.linear_roots):
            raise ValueError("linear roots must be nonnegative")

    def to_laurent(self) -> LaurentPolynomial:
        return LaurentPolynomial(self.t_power, Polynomial.from_roots(self.linear_roots))

    def expand(self) -> Polynomial:
        return self.to_laurent().to_polynomial()

    def is_polynomial(self) -> bool:
        return self.to_laurent().is_polynomial()

    def to_dict(self) -> Dict[str, object]:
        return {"t_power": self.t_power, "roots": list(self.linear_roots)}

    def __str__(self) -> str:
        parts = []
        zeros = sum(1 for r in self.linear_roots if r == 0)
        power = self.t_power + zeros
        if power == 1:
            parts.append("t")
        elif power:
            parts.append(f"t^{power}")
        parts.extend(f"(t - {r})" for r in self.linear_roots if r)
        return " ".join(parts) if parts else "1"


def nonnegative_integer_factorization(poly: Polynomial) -> Optional[FactoredForm]:
    """Factor ``poly`` as ``t^k * prod(t - r_i)`` with integers ``r_i > 0``.

    Returns ``None`` when the polynomial is not monic or has a root that is not
    a nonnegative integer.
    """
    if poly.is_zero() or poly.leading_coefficient != 1:
        return None
    k = poly.lowest_degree()
    reduced = poly.shift(-k)
    roots: List[int] = []
    if reduced.degree > 0:
        for root, multiplicity in reduced.to_sympy().ground_roots().items():
            if not root.is_integer or root < 0:
                return None
            roots.extend([int(root)] * multiplicity)
    if len(roots) != reduced.degree:
        logger.debug("%s does not split over the nonnegative integers", poly)
        return None
    form = FactoredForm(k, tuple(sorted(roots)))
    if form.expand() != poly:
        return None
    return form
