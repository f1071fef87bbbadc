import itertools
import logging
import random
from typing import Optional

from sympy import mod_inverse

from coexlab.group_invariants import DEFAULT_SEED, log_element_order
from coexlab.group_types import Group
from coexlab.lazard_bch import (
    BCHTable,
    DegreeUnsupportedException,
    GroupWord,
    addition_word,
    bch_evaluate,
    bch_table,
    bracket_word,
    evaluate_word,
)
from coexlab.liering_core import (
    JacobiFailException,
    OrderIncompatException,
    make_liering,
    nilpotency_class,
)
from coexlab.liering_types import LieRing
from coexlab.residue_types import GroupElement

logger = logging.getLogger(__name__)

RECONSTRUCTION_SAMPLES = 200


class ClassTooHighException(Exception):
    """Exception for when the ring class is not below p or beyond the BCH table"""


class DenominatorNotInvertibleException(Exception):
    """Exception for when a BCH denominator is divisible by p"""


class ReconstructionDivergenceException(Exception):
    """Exception for when inverse BCH words fail to recover the ring"""


class LazardGroup(Group):
    """The Lie ring carrier with x·y = BCH(x, y)"""

    def __init__(self, ring: LieRing, table: BCHTable):
        super().__init__(ring.p)
        self.ring = ring
        self.atype = ring.atype
        self.table = table
        self.name = ring.name

        modulus = ring.atype.moduli[0] if ring.rank else 1
        for _, coeff in table.terms:
            if coeff.q % ring.p == 0:
                raise DenominatorNotInvertibleException(
                    f"Coefficient {coeff} has a denominator divisible by {ring.p}"
                )
        self.residues = {
            coeff: coeff.p * int(mod_inverse(coeff.q, modulus)) % modulus
            for _, coeff in table.terms
        }

    def one(self) -> GroupElement:
        return self.atype.zero()

    def mult(self, a: GroupElement, b: GroupElement) -> GroupElement:
        if self.ring.is_abelian:
            return self.atype.add(a, b)

        return bch_evaluate(
            self.table,
            a,
            b,
            add=self.atype.add,
            scale=lambda q, v: self.atype.scale(self.residues[q], v),
            bracket=self.ring.bracket,
        )

    def inverse(self, a: GroupElement) -> GroupElement:
        return self.atype.neg(a)

    def power(self, a: GroupElement, k: int) -> GroupElement:
        return self.atype.scale(k, a)

    def elements(self):
        return itertools.product(*(range(m) for m in self.atype.moduli))

    def generators(self):
        return [self.atype.basis(i) for i in range(self.atype.rank)]

    @property
    def order(self) -> int:
        return self.atype.order


def group_from_liering(ring: LieRing) -> LazardGroup:
    cls = nilpotency_class(ring)
    if cls >= ring.p:
        raise ClassTooHighException(f"{ring} has class {cls}, not below {ring.p}")

    try:
        table = bch_table(max(cls, 1))
    except DegreeUnsupportedException as e:
        raise ClassTooHighException(f"{ring} has class {cls}") from e

    logger.debug(f"BCH group on {ring} through degree {table.degree}")
    return LazardGroup(ring, table)


def evaluate_group_word(group: Group, word: GroupWord, g, h):
    result = group.one()
    for tree, q in word:
        factor = evaluate_word(tree, (g, h), group.commutator)
        result = group.mult(result, rational_power(group, factor, q))
    return result


def rational_power(group: Group, t, q):
    """t^q with the denominator inverted modulo the order of t"""

    if q.q == 1:
        return group.power(t, int(q.p))

    order = group.p ** log_element_order(group, t)
    if order == 1:
        return t
    return group.power(t, int(q.p) * int(mod_inverse(int(q.q), order)) % order)


def bracket_from_group(
    group: LazardGroup, degree: Optional[int] = None, rng=None
) -> LieRing:
    """Recover the Lie ring on the carrier of group from group words alone"""

    atype = group.atype
    degree = degree or max(group.table.degree, 2)
    add_word = addition_word(degree)
    br_word = bracket_word(degree)

    def recovered_add(x, y):  # noqa: WPS430
        return evaluate_group_word(group, add_word, x, y)

    def recovered_bracket(x, y):  # noqa: WPS430
        return evaluate_group_word(group, br_word, x, y)

    basis = [atype.basis(i) for i in range(atype.rank)]
    table = {}
    for i, j in itertools.combinations(range(atype.rank), 2):
        if recovered_add(basis[i], basis[j]) != atype.add(basis[i], basis[j]):
            raise ReconstructionDivergenceException(
                f"Recovered x{i + 1} + x{j + 1} is wrong"
            )
        value = recovered_bracket(basis[i], basis[j])
        if any(value):
            table[(i, j)] = value

    try:
        ring = make_liering(atype, table, name=group.name)
    except (OrderIncompatException, JacobiFailException) as e:
        raise ReconstructionDivergenceException(
            f"Recovered brackets do not form a Lie ring: {e}"
        ) from e

    rng = rng or random.Random(DEFAULT_SEED)
    for _ in range(RECONSTRUCTION_SAMPLES):
        x = tuple(rng.randrange(m) for m in atype.moduli)
        y = tuple(rng.randrange(m) for m in atype.moduli)
        if recovered_add(x, y) != atype.add(x, y):
            raise ReconstructionDivergenceException(f"Recovered {x} + {y} is wrong")
        if recovered_bracket(x, y) != ring.bracket(x, y):
            raise ReconstructionDivergenceException(f"Recovered [{x}, {y}] is wrong")

    return ring
