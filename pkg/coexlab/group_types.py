from dataclasses import dataclass, field
from typing import FrozenSet, Hashable, Iterable, List, Tuple

Element = Hashable


class Group(object):
    """Finite p-group given by its multiplication.

    Subclasses provide one, mult, inverse, elements and generators. Powers and
    commutators are derived from those.
    """

    name = ""

    def __init__(self, p: int):
        self.p = p
        self.power_cache = {}

    def one(self) -> Element:
        raise NotImplementedError

    def mult(self, a: Element, b: Element) -> Element:
        raise NotImplementedError

    def inverse(self, a: Element) -> Element:
        raise NotImplementedError

    def elements(self) -> Iterable[Element]:
        raise NotImplementedError

    def generators(self) -> List[Element]:
        raise NotImplementedError

    @property
    def order(self) -> int:
        return sum(1 for _ in self.elements())

    def power(self, a: Element, k: int) -> Element:
        if k < 0:
            return self.power(self.inverse(a), -k)

        result = self.one()
        base = a
        while k:
            if k & 1:
                result = self.mult(result, base)
            base = self.mult(base, base)
            k >>= 1
        return result

    def commutator(self, a: Element, b: Element) -> Element:
        """a⁻¹b⁻¹ab"""

        return self.mult(
            self.mult(self.inverse(a), self.inverse(b)), self.mult(a, b)
        )

    def conjugate(self, a: Element, g: Element) -> Element:
        """g⁻¹ag"""

        return self.mult(self.mult(self.inverse(g), a), g)

    def __str__(self):
        return self.name or type(self).__name__


@dataclass(frozen=True)
class CheckReport(object):
    name: str
    passed: bool
    failures: Tuple[str, ...] = ()
    checked: int = 0

    def __str__(self):
        status = "ok" if self.passed else "FAILED"
        return f"{self.name}: {status} ({self.checked} checked)"


@dataclass(frozen=True)
class GroupInvariants(object):
    order: int
    exponent: int
    nilpotency_class: int
    omega_orders: Tuple[int, ...]
    agemo_orders: Tuple[int, ...]
    mu: Tuple[int, ...]
    omega: Tuple[int, ...] = field(default=())

    @property
    def coexponent(self) -> int:
        return sum(self.mu) - (self.mu[0] if self.mu else 0)


def make_report(name: str, failures: List[str], checked: int) -> CheckReport:
    return CheckReport(
        name=name,
        passed=not failures,
        failures=tuple(failures),
        checked=checked,
    )


@dataclass(frozen=True)
class Subgroup(object):
    members: FrozenSet[Element]
    gens: Tuple[Element, ...]

    @property
    def order(self) -> int:
        return len(self.members)

    def __contains__(self, x):
        return x in self.members
