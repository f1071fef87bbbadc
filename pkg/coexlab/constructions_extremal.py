import functools
import itertools
import logging
from typing import Tuple

from sympy import isprime

from coexlab.group_invariants import lower_central_series
from coexlab.group_types import CheckReport, Group, make_report

logger = logging.getLogger(__name__)


class ParameterViolationException(Exception):
    """Exception for when (p, f, n) fall outside p ≥ f + 1, n ≥ f + 2"""


class ExtremalStageOne(Group):
    """A ⋊ ⟨g⟩ with A = (ℤ/p)^(f+1) and g of order p^(n-f).

    g acts through the single Jordan block xᵢ ↦ xᵢ·xᵢ₊₁. Elements are
    (a₁, …, a_{f+1}, k) standing for the pair (a, g^k), multiplied as
    (a, k)(b, l) = (a + b·α^(-k), k + l).
    """

    def __init__(self, p: int, f: int, n: int):
        super().__init__(p)
        self.f = f
        self.n = n
        self.width = f + 1
        self.cyclic_order = p ** (n - f)
        self.name = f"P({p}, {f}, {n})"

    def one(self):
        return (0,) * (self.width + 1)

    def mult(self, a, b):
        shifted = self.act(b[:-1], a[-1])
        vec = tuple((x + y) % self.p for x, y in zip(a[:-1], shifted))
        return vec + ((a[-1] + b[-1]) % self.cyclic_order,)

    def inverse(self, a):
        k = a[-1]
        vec = self.act(tuple(-x % self.p for x in a[:-1]), -k)
        return vec + (-k % self.cyclic_order,)

    def elements(self):
        for vec in itertools.product(range(self.p), repeat=self.width):
            for k in range(self.cyclic_order):
                yield vec + (k,)

    def generators(self):
        return [self.x(i) for i in range(1, self.width + 1)] + [self.g()]

    @property
    def order(self) -> int:
        return self.p**self.width * self.cyclic_order

    def x(self, i: int):
        return tuple(int(j == i - 1) for j in range(self.width)) + (0,)

    def g(self):
        return (0,) * self.width + (1,)

    def act(self, vec: Tuple[int, ...], k: int) -> Tuple[int, ...]:
        """vec·α^(-k)"""

        return _inverse_jordan_power(tuple(vec), k % self.p, self.p)


class ExtremalStageTwo(Group):
    """Stage one modulo ⟨g^(p^(n-f-1))·x_{f+1}⁻¹⟩, elements (a₁, …, a_f, k)"""

    def __init__(self, stage_one: ExtremalStageOne):
        super().__init__(stage_one.p)
        self.stage_one = stage_one
        self.f = stage_one.f
        self.n = stage_one.n
        self.shift = self.p ** (self.n - self.f - 1)
        self.name = f"P({self.p}, {self.f}, {self.n})/N"

    def lift(self, a):
        return tuple(a[:-1]) + (0, a[-1])

    def reduce(self, a):
        k = (a[-1] + a[-2] * self.shift) % self.stage_one.cyclic_order
        return tuple(a[:-2]) + (k,)

    def one(self):
        return (0,) * (self.f + 1)

    def mult(self, a, b):
        return self.reduce(self.stage_one.mult(self.lift(a), self.lift(b)))

    def inverse(self, a):
        return self.reduce(self.stage_one.inverse(self.lift(a)))

    def elements(self):
        for vec in itertools.product(range(self.p), repeat=self.f):
            for k in range(self.stage_one.cyclic_order):
                yield vec + (k,)

    def generators(self):
        return [
            self.reduce(self.stage_one.x(i)) for i in range(1, self.f + 1)
        ] + [self.reduce(self.stage_one.g())]

    @property
    def order(self) -> int:
        return self.p**self.f * self.stage_one.cyclic_order


def extremal_group(
    p: int, f: int, n: int
) -> Tuple[ExtremalStageOne, ExtremalStageTwo]:
    if not isprime(p):
        raise ParameterViolationException(f"{p} is not prime")
    if p < f + 1:
        raise ParameterViolationException(f"p = {p} must be at least f + 1 = {f + 1}")
    if n < f + 2:
        raise ParameterViolationException(f"n = {n} must be at least f + 2 = {f + 2}")

    stage_one = ExtremalStageOne(p, f, n)
    logger.debug(f"Built {stage_one} of order {stage_one.order}")
    return stage_one, ExtremalStageTwo(stage_one)


def power_lemma_check(group: ExtremalStageOne) -> CheckReport:
    """(g^k·a)^(p²) = g^(k·p²) for every a ∈ A and every k"""

    p = group.p
    failures = []
    checked = 0

    for vec in itertools.product(range(p), repeat=group.width):
        a = vec + (0,)
        for k in range(group.cyclic_order):
            gk = group.power(group.g(), k)
            lhs = group.power(group.mult(gk, a), p * p)
            rhs = group.power(group.g(), k * p * p)
            checked += 1
            if lhs != rhs:
                failures.append(f"k={k}, a={vec}")

    return make_report("power lemma", failures, checked)


def lower_central_series_check(group: ExtremalStageOne) -> CheckReport:
    """γᵢ(P) = ⟨xᵢ, …, x_{f+1}⟩ for 2 ≤ i ≤ f + 2"""

    series = lower_central_series(group)
    failures = []

    for i in range(2, group.width + 2):
        expected = {
            vec + (0,)
            for vec in itertools.product(range(group.p), repeat=group.width)
            if not any(vec[: i - 1])
        }
        actual = series[i - 1].members if i - 1 < len(series) else {group.one()}
        if set(actual) != expected:
            failures.append(f"γ{i} has order {len(actual)}, expected {len(expected)}")

    return make_report("lower central series", failures, group.width)


@functools.lru_cache(maxsize=None)
def _inverse_jordan_power(vec, k, p):
    for _ in range(k):
        out = []
        prev = 0
        for b in vec:
            prev = (b - prev) % p
            out.append(prev)
        vec = tuple(out)
    return vec
