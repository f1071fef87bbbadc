from dataclasses import dataclass, field
from typing import Tuple

from coexlab.residue_types import AbelianType, GroupElement, TypeInvariants

BracketTable = Tuple[Tuple[GroupElement, ...], ...]


@dataclass(frozen=True)
class LieRing(object):
    """Lie ring on an abelian p-group given by structure constants.

    brackets[i][j] is [xᵢ, xⱼ] on the basis of atype. The table is stored in
    full, antisymmetric with zero diagonal.
    """

    atype: AbelianType
    brackets: BracketTable
    name: str = field(default="", compare=False)
    nonzero_pairs: Tuple[Tuple[int, int, GroupElement], ...] = field(
        init=False, repr=False, compare=False
    )

    def __post_init__(self):
        pairs = tuple(
            (i, j, self.brackets[i][j])
            for i in range(self.atype.rank)
            for j in range(i + 1, self.atype.rank)
            if any(self.brackets[i][j])
        )
        object.__setattr__(self, "nonzero_pairs", pairs)  # noqa: WPS609

    @property
    def p(self):
        return self.atype.p

    @property
    def rank(self):
        return self.atype.rank

    @property
    def order(self):
        return self.atype.order

    @property
    def is_abelian(self):
        return not self.nonzero_pairs

    def bracket(self, x: GroupElement, y: GroupElement) -> GroupElement:
        res = [0] * self.atype.rank

        for i, j, value in self.nonzero_pairs:
            k = x[i] * y[j] - x[j] * y[i]
            if k:
                for idx, c in enumerate(value):
                    res[idx] += k * c

        return self.atype.reduce(res)

    def __str__(self):
        return self.name or f"LieRing{self.atype.exponents}"


@dataclass(frozen=True)
class RingFingerprint(object):
    n: int
    invariants: TypeInvariants
    nilpotency_class: int
    derived_order: int
    center_order: int
    derived_agemo_depth: int
    derived_center_power_order: int
