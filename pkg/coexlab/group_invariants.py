import itertools
import logging
import random
from typing import Iterable, List, Optional

from progress.bar import Bar

from coexlab.group_types import (
    CheckReport,
    Element,
    Group,
    GroupInvariants,
    Subgroup,
    make_report,
)
from coexlab.liering_core import NotNilpotentException, TooLargeException
from coexlab.residue_core import dual_partition

logger = logging.getLogger(__name__)

INVARIANTS_CAP = 7
EXHAUSTIVE_TRIPLES = 2_000_000
EXHAUSTIVE_PAIRS_CAP = 4
DEFAULT_SEED = 1729


def subgroup_generated(group: Group, candidates: Iterable[Element]) -> Subgroup:
    """Grow ⟨candidates⟩, keeping only candidates that enlarge the subgroup"""

    members = {group.one()}
    gens = []

    for c in candidates:
        if c in members:
            continue
        gens.append(c)
        members = _extend_closure(group, members, gens)

    return Subgroup(members=frozenset(members), gens=tuple(gens))


def normal_closure(
    group: Group,
    gens: Iterable[Element],
    conjugators: Optional[List[Element]] = None,
) -> Subgroup:
    if conjugators is None:
        conjugators = group.generators()

    sub = subgroup_generated(group, gens)
    members = set(sub.members)
    gens = list(sub.gens)

    pending = list(gens)
    while pending:
        h = pending.pop()
        for g in conjugators:
            c = group.conjugate(h, g)
            if c not in members:
                gens.append(c)
                pending.append(c)
                members = _extend_closure(group, members, gens)

    return Subgroup(members=frozenset(members), gens=tuple(gens))


def commutator_subgroup(
    group: Group, normal: Subgroup, others: Optional[List[Element]] = None
) -> Subgroup:
    """[N, H] for N normal, H generated by others (default: the whole group)"""

    if others is None:
        others = group.generators()

    return normal_closure(
        group, [group.commutator(a, g) for a in normal.gens for g in others]
    )


def whole_group(group: Group) -> Subgroup:
    return subgroup_generated(group, group.generators())


def lower_central_series(group: Group) -> List[Subgroup]:
    term = whole_group(group)
    series = [term]

    while term.order > 1:
        nxt = commutator_subgroup(group, term)
        series.append(nxt)
        if nxt.order == term.order:
            break
        term = nxt

    return series


def nilpotency_class(group: Group) -> int:
    series = lower_central_series(group)
    if series[-1].order > 1:
        raise NotNilpotentException(f"{group} is not nilpotent")
    return len(series) - 1


def p_power(group: Group, x: Element) -> Element:
    cached = group.power_cache.get(x)
    if cached is None:
        cached = group.power(x, group.p)
        group.power_cache[x] = cached
    return cached


def log_element_order(group: Group, x: Element) -> int:
    one = group.one()
    k = 0
    while x != one:
        x = p_power(group, x)
        k += 1
    return k


def log_exponent(group: Group) -> int:
    return max((log_element_order(group, x) for x in group.elements()), default=0)


def omega_subgroup(group: Group, i: int) -> Subgroup:
    return subgroup_generated(
        group, (x for x in group.elements() if log_element_order(group, x) <= i)
    )


def agemo_subgroup(group: Group, i: int) -> Subgroup:
    powers = set()
    for x in group.elements():
        for _ in range(i):
            x = p_power(group, x)
        powers.add(x)
    return subgroup_generated(group, sorted(powers, key=repr))


def group_invariants(group: Group, progress: bool = False) -> GroupInvariants:
    order = group.order
    if order > group.p**INVARIANTS_CAP:
        raise TooLargeException(
            f"Invariant scans are capped at p^{INVARIANTS_CAP}, got {order}"
        )

    if progress:
        for x in Bar(f"Powers in {group}", max=order).iter(list(group.elements())):
            log_element_order(group, x)

    e = log_exponent(group)
    omega_orders = tuple(omega_subgroup(group, i).order for i in range(e + 1))
    agemo_orders = tuple(agemo_subgroup(group, i).order for i in range(e + 1))

    omega = tuple(
        _log(omega_orders[i] // omega_orders[i - 1], group.p) for i in range(1, e + 1)
    )

    return GroupInvariants(
        order=order,
        exponent=group.p**e,
        nilpotency_class=nilpotency_class(group),
        omega_orders=omega_orders,
        agemo_orders=agemo_orders,
        mu=dual_partition(omega),
        omega=omega,
    )


def duality_check(
    group: Group, invariants: Optional[GroupInvariants] = None
) -> CheckReport:
    """|Ωᵢ/Ωᵢ₋₁| = |℧ᵢ₋₁/℧ᵢ| for every i up to the exponent"""

    invariants = invariants or group_invariants(group)
    omega_orders = invariants.omega_orders
    agemo_orders = invariants.agemo_orders

    failures = []
    for i in range(1, len(omega_orders)):
        left = omega_orders[i] // omega_orders[i - 1]
        right = agemo_orders[i - 1] // agemo_orders[i]
        if left != right:
            failures.append(
                f"i={i}: |Ω{i}/Ω{i - 1}| = {left}, |℧{i - 1}/℧{i}| = {right}"
            )

    return make_report("duality", failures, len(omega_orders) - 1)


def inclusion_check(
    group: Group, invariants: Optional[GroupInvariants] = None
) -> CheckReport:
    """[℧ᵢ(G), G, …, G] ⊆ ℧ᵢ₊₁(G) with ωᵢ₊₁ - 1 commutations

    Checked for 1 ≤ i ≤ μ₂ - 1, the range where ωᵢ₊₁ ≥ 2.
    """

    invariants = invariants or group_invariants(group)
    mu = invariants.mu
    omega = invariants.omega
    mu2 = mu[1] if len(mu) > 1 else 0

    failures = []
    checked = 0
    for i in range(1, mu2):
        term = agemo_subgroup(group, i)
        target = agemo_subgroup(group, i + 1)
        for _ in range(omega[i] - 1):
            term = commutator_subgroup(group, term)
        checked += 1
        if not term.members <= target.members:
            failures.append(
                f"i={i}: commutator chain of order {term.order} leaves ℧{i + 1}"
            )

    return make_report("inclusion", failures, checked)


def class_bound_check(
    group: Group, invariants: Optional[GroupInvariants] = None
) -> CheckReport:
    invariants = invariants or group_invariants(group)
    bound = invariants.coexponent + 1

    failures = []
    if invariants.nilpotency_class > bound:
        failures.append(
            f"class {invariants.nilpotency_class} exceeds coexponent + 1 = {bound}"
        )

    return make_report("class bound", failures, 1)


def regularity_check(
    group: Group, pairs: int = 2000, rng=None, progress: bool = False
) -> CheckReport:
    """x^p·y^p = (xy)^p·z with z ∈ ℧₁(γ₂(⟨x, y⟩)) on every tested pair"""

    elements = list(group.elements())
    if len(elements) <= group.p**EXHAUSTIVE_PAIRS_CAP:
        tested = itertools.product(elements, repeat=2)
        total = len(elements) ** 2
    else:
        rng = rng or random.Random(DEFAULT_SEED)
        tested = ((rng.choice(elements), rng.choice(elements)) for _ in range(pairs))
        total = pairs

    if progress:
        tested = Bar("Regularity", max=total).iter(list(tested))

    failures = []
    for x, y in tested:
        if not _regular_pair(group, x, y):
            failures.append(f"no witness for ({x}, {y})")

    return make_report("regularity", failures, total)


def associativity_check(
    group: Group, samples: int = 1_000_000, rng=None, progress: bool = False
) -> CheckReport:
    """(ab)c = a(bc), over all triples, over all (a, b, generator), or sampled

    The c with (ab)c = a(bc) for every a, b form a set closed under products,
    so checking generators is exhaustive once their products reach all of G.
    """

    elements = list(group.elements())
    gens = group.generators()

    if len(elements) ** 3 <= EXHAUSTIVE_TRIPLES:
        tested = itertools.product(elements, repeat=3)
        total = len(elements) ** 3
    elif len(elements) ** 2 * len(gens) <= EXHAUSTIVE_TRIPLES and _products_cover(
        group, gens, len(elements)
    ):
        tested = itertools.product(elements, elements, gens)
        total = len(elements) ** 2 * len(gens)
    else:
        rng = rng or random.Random(DEFAULT_SEED)
        tested = (
            (rng.choice(elements), rng.choice(elements), rng.choice(elements))
            for _ in range(samples)
        )
        total = samples

    if progress:
        tested = Bar("Associativity", max=total).iter(tested)

    failures = []
    for a, b, c in tested:
        if group.mult(group.mult(a, b), c) != group.mult(a, group.mult(b, c)):
            failures.append(f"({a}·{b})·{c} != {a}·({b}·{c})")
            if len(failures) > 10:
                break

    return make_report("associativity", failures, total)


def identity_inverse_check(group: Group) -> CheckReport:
    one = group.one()

    failures = []
    checked = 0
    for x in group.elements():
        checked += 1
        if group.mult(x, one) != x or group.mult(one, x) != x:
            failures.append(f"identity law fails at {x}")
        elif group.mult(x, group.inverse(x)) != one:
            failures.append(f"inverse law fails at {x}")

    return make_report("identity and inverse", failures, checked)


def _regular_pair(group, x, y):
    p = group.p
    z = group.mult(
        group.power(group.mult(x, y), -p),
        group.mult(group.power(x, p), group.power(y, p)),
    )
    if z == group.one():
        return True

    derived = normal_closure(group, [group.commutator(x, y)], [x, y])
    powers = subgroup_generated(group, [group.power(c, p) for c in derived.members])
    return z in powers


def _products_cover(group, gens, order):
    return len(_extend_closure(group, set(gens), gens)) == order


def _extend_closure(group, members, gens):
    members = set(members)
    frontier = list(members)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = group.mult(x, g)
                if y not in members:
                    members.add(y)
                    nxt.append(y)
        frontier = nxt
    return members


def _log(order: int, p: int) -> int:
    k = 0
    while order > 1:
        order //= p
        k += 1
    return k
