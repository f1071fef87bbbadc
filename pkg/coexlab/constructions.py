import logging
from dataclasses import dataclass

from coexlab.graded_maps import (
    GradedMatrix,
    apply,
    is_derivation,
    is_nilpotent_endo,
    scale_matrix,
)
from coexlab.liering_core import (
    NotNilpotentException,
    center,
    make_liering,
    nilpotency_class,
    quotient,
)
from coexlab.liering_types import LieRing
from coexlab.residue_core import element_order, subgroup_closure, subgroup_contains
from coexlab.residue_types import AbelianType, GroupElement

logger = logging.getLogger(__name__)


class NotADerivationException(Exception):
    """Exception for when an action matrix is not a derivation of the ring"""


class OrderObstructionException(Exception):
    """Exception for when p^m does not kill the action of the cyclic ring"""


class SpecViolationException(Exception):
    """Exception for when construction data misses one of its hypotheses"""


class NotNilpotentWitnessException(Exception):
    """Exception for when a nilpotent action yields a non-nilpotent ring"""


@dataclass(frozen=True)
class UConstructionSpec(object):
    ring: LieRing
    m: int
    sigma: GradedMatrix
    z: GroupElement


def ring_221(p: int, alpha1: int, alpha2: int, name: str = "") -> LieRing:
    """(ℤ/p²)z ⊕ (ℤ/p²)u₁ ⊕ (ℤ/p)u₂ with [u₁, u₂] = α₁pz + α₂pu₁"""

    atype = AbelianType(p, (2, 2, 1))
    return make_liering(
        atype,
        {(1, 2): (alpha1 * p, alpha2 * p, 0)},
        name=name,
    )


def filiform_ring(p: int, rank: int, name: str = "") -> LieRing:
    """(ℤ/p)x₁ ⊕ … ⊕ (ℤ/p)x_rank with [x₁, xᵢ] = xᵢ₊₁, of class rank - 1"""

    atype = AbelianType(p, (1,) * rank)
    return make_liering(
        atype,
        {(0, i): atype.basis(i + 1) for i in range(1, rank - 1)},
        name=name or f"F{rank}",
    )


def extension_slot(atype: AbelianType, m: int) -> int:
    """Index of the new cyclic generator of order p^m"""

    return sum(1 for e in atype.exponents if e >= m)


def semidirect_cyclic(
    ring: LieRing, m: int, sigma: GradedMatrix, name: str = ""
) -> LieRing:
    """L ⋊ ⟨w⟩ with w of order p^m acting through [l, w] = l·sigma"""

    atype = ring.atype

    if not is_derivation(ring, sigma):
        raise NotADerivationException(f"{sigma} is not a derivation of {ring}")
    if any(scale_matrix(atype.p**m, sigma).flat):
        raise OrderObstructionException(f"p^{m} does not kill {sigma}")

    slot = extension_slot(atype, m)
    exponents = atype.exponents[:slot] + (m,) + atype.exponents[slot:]
    new_type = AbelianType(atype.p, exponents)

    def lift(x):  # noqa: WPS430
        return tuple(x[:slot]) + (0,) + tuple(x[slot:])

    def index(i):  # noqa: WPS430
        return i if i < slot else i + 1

    table = {}
    for i, j, value in ring.nonzero_pairs:
        table[(index(i), index(j))] = lift(value)
    for i in range(atype.rank):
        image = apply(sigma, atype.basis(i))
        if any(image):
            table[(index(i), slot)] = lift(image)

    logger.debug(f"Extending {ring} by a cyclic ring of order p^{m}")
    return make_liering(new_type, table, name=name)


def check_u_spec(spec: UConstructionSpec):
    ring = spec.ring
    atype = ring.atype
    mu1 = atype.exponents[0]

    checks = [
        (subgroup_contains(center(ring), spec.z), "z must be central"),
        (
            element_order(spec.z, atype) == atype.p**mu1,
            f"z must have order p^{mu1}",
        ),
        (not any(apply(spec.sigma, spec.z)), "z·sigma must vanish"),
        (is_derivation(ring, spec.sigma), "sigma must be a derivation"),
        (
            not any(scale_matrix(atype.p**spec.m, spec.sigma).flat),
            f"p^{spec.m} must kill sigma",
        ),
        (spec.m >= 2 * mu1, f"m = {spec.m} must be at least 2μ₁ = {2 * mu1}"),
    ]

    for passed, message in checks:
        if not passed:
            raise SpecViolationException(message)


def u_construction(spec: UConstructionSpec, name: str = "") -> LieRing:
    """Quotient of U ⋊ ⟨w⟩ by ⟨p^(m-μ₁)·w - z⟩"""

    check_u_spec(spec)

    ring = spec.ring
    atype = ring.atype
    mu1 = atype.exponents[0]

    extended = semidirect_cyclic(ring, spec.m, spec.sigma)
    slot = extension_slot(atype, spec.m)
    ext_type = extended.atype

    lifted_z = tuple(spec.z[:slot]) + (0,) + tuple(spec.z[slot:])
    generator = ext_type.sub(
        ext_type.scale(atype.p ** (spec.m - mu1), ext_type.basis(slot)), lifted_z
    )
    result = quotient(extended, subgroup_closure([generator], ext_type), name=name)

    if is_nilpotent_endo(spec.sigma):
        try:
            nilpotency_class(result)
        except NotNilpotentException as e:
            raise NotNilpotentWitnessException(
                f"Nilpotent action on {ring} gave a non-nilpotent ring"
            ) from e

    return result
