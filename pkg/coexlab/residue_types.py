from dataclasses import dataclass
from typing import Tuple

from sympy import isprime

GroupElement = Tuple[int, ...]


class NotAPrimeException(Exception):
    """Exception for when a modulus base is not prime"""


class BadTypeException(Exception):
    """Exception for when an abelian type is not a non-increasing sequence"""


@dataclass(frozen=True)
class PrimePower(object):
    p: int
    k: int

    def __post_init__(self):
        if not isprime(self.p):
            raise NotAPrimeException(f"{self.p} is not prime")
        if self.k < 1:
            raise ValueError(f"Exponent must be positive, got {self.k}")

    @property
    def modulus(self):
        return self.p**self.k


@dataclass(frozen=True)
class AbelianType(object):
    """Type of ⊕ ℤ/p^{eᵢ}, exponents non-increasing"""

    p: int
    exponents: Tuple[int, ...]

    def __post_init__(self):
        if not isprime(self.p):
            raise NotAPrimeException(f"{self.p} is not prime")

        exponents = tuple(self.exponents)
        object.__setattr__(self, "exponents", exponents)  # noqa: WPS609

        if any(e < 1 for e in exponents):
            raise BadTypeException(f"Exponents must be positive: {exponents}")
        if any(a < b for a, b in zip(exponents, exponents[1:])):
            raise BadTypeException(f"Exponents must be non-increasing: {exponents}")

    @property
    def rank(self):
        return len(self.exponents)

    @property
    def n(self):
        return sum(self.exponents)

    @property
    def order(self):
        return self.p**self.n

    @property
    def moduli(self):
        return tuple(self.p**e for e in self.exponents)

    def zero(self) -> GroupElement:
        return (0,) * self.rank

    def basis(self, i) -> GroupElement:
        return tuple(int(j == i) for j in range(self.rank))

    def reduce(self, coords) -> GroupElement:
        return tuple(c % m for c, m in zip(coords, self.moduli))

    def add(self, x, y) -> GroupElement:
        return tuple((a + b) % m for a, b, m in zip(x, y, self.moduli))

    def sub(self, x, y) -> GroupElement:
        return tuple((a - b) % m for a, b, m in zip(x, y, self.moduli))

    def neg(self, x) -> GroupElement:
        return tuple(-a % m for a, m in zip(x, self.moduli))

    def scale(self, k, x) -> GroupElement:
        return tuple(k * a % m for a, m in zip(x, self.moduli))

    def is_valid(self, x):
        return len(x) == self.rank and all(
            0 <= c < m for c, m in zip(x, self.moduli)
        )


@dataclass(frozen=True)
class TypeInvariants(object):
    mu: Tuple[int, ...]
    omega: Tuple[int, ...]

    @property
    def n(self):
        return sum(self.mu)

    @property
    def exponent(self):
        return self.mu[0] if self.mu else 0

    @property
    def coexponent(self):
        return self.n - self.exponent


@dataclass(frozen=True)
class SubgroupBasis(object):
    """Echelon generators of a subgroup of an abelian p-group.

    Row i has its first nonzero coordinate at pivots[i], equal to a power of p
    times a unit. The subgroup is the direct sum of the cyclic groups generated
    by the rows, row i contributing a factor of order p^exponents[i].
    """

    atype: AbelianType
    rows: Tuple[GroupElement, ...]
    pivots: Tuple[int, ...]
    exponents: Tuple[int, ...]

    @property
    def order(self):
        return self.atype.p ** sum(self.exponents)

    @property
    def log_order(self):
        return sum(self.exponents)
