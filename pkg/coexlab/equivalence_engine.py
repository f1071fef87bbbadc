import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from progress.bar import Bar
from sympy import mod_inverse

from coexlab.constructions import UConstructionSpec, u_construction
from coexlab.graded_maps import (
    GradedMatrix,
    add_matrices,
    apply,
    compose,
    identity_matrix,
    inner_derivation,
    inverse,
    is_lie_automorphism,
    lie_automorphism_generators,
    scale_matrix,
    sub_matrices,
)
from coexlab.graded_maps_enum import (
    ENUMERATION_CAP,
    enumerate_derivations_centralizing,
    enumerate_lie_auts_fixing_line,
)
from coexlab.liering_core import TooLargeException, center, fingerprint
from coexlab.liering_types import LieRing
from coexlab.residue_core import element_order, subgroup_elements
from coexlab.residue_types import GroupElement

logger = logging.getLogger(__name__)

Flat = Tuple[int, ...]
Move = Tuple[GradedMatrix, GradedMatrix, int]


class NotOnLineException(Exception):
    """Exception for when an automorphism does not map z onto a multiple of z"""


class ClosureBreakException(Exception):
    """Exception for when a move leaves the set of centralizing derivations"""


@dataclass(frozen=True)
class EquivalenceWitness(object):
    """σπ = π(ad x + ατ) with zπ = αz"""

    pi: GradedMatrix
    alpha: int
    x: GroupElement


@dataclass(frozen=True)
class OrbitPartition(object):
    states: Tuple[Flat, ...]
    class_of: Dict[Flat, int] = field(repr=False)
    sizes: Tuple[int, ...]
    representatives: Tuple[GradedMatrix, ...]
    labels: Tuple[Optional[int], ...] = ()

    @property
    def count(self) -> int:
        return len(self.sizes)


def line_scalar(pi: GradedMatrix, z: GroupElement) -> int:
    atype = pi.atype
    image = apply(pi, z)
    for alpha in range(element_order(z, atype)):
        if atype.scale(alpha, z) == image:
            return alpha

    raise NotOnLineException(f"{pi} moves {z} off its line")


def check_witness(
    ring: LieRing,
    z: GroupElement,
    sigma: GradedMatrix,
    tau: GradedMatrix,
    witness: EquivalenceWitness,
) -> bool:
    pi = witness.pi
    atype = ring.atype

    if witness.alpha % atype.p == 0:
        return False
    if apply(pi, z) != atype.scale(witness.alpha, z):
        return False
    if not is_lie_automorphism(ring, pi):
        return False

    target = add_matrices(
        inner_derivation(ring, witness.x), scale_matrix(witness.alpha, tau)
    )
    return compose(sigma, pi) == compose(pi, target)


def invert_witness(ring: LieRing, witness: EquivalenceWitness) -> EquivalenceWitness:
    """Witness of τ ~ σ from a witness of σ ~ τ"""

    atype = ring.atype
    modulus = atype.moduli[0]
    alpha_inv = int(mod_inverse(witness.alpha, modulus))
    pi_inv = inverse(witness.pi)

    return EquivalenceWitness(
        pi=pi_inv,
        alpha=alpha_inv,
        x=atype.scale(-alpha_inv, apply(pi_inv, witness.x)),
    )


def compose_witnesses(
    ring: LieRing, first: EquivalenceWitness, second: EquivalenceWitness
) -> EquivalenceWitness:
    """Witness of σ ~ ρ from witnesses of σ ~ τ and τ ~ ρ"""

    atype = ring.atype
    return EquivalenceWitness(
        pi=compose(first.pi, second.pi),
        alpha=first.alpha * second.alpha % atype.moduli[0],
        x=atype.add(apply(second.pi, first.x), atype.scale(first.alpha, second.x)),
    )


def act(move: Move, tau: GradedMatrix) -> GradedMatrix:
    """τ ↦ π(ατ)π⁻¹"""

    pi, pi_inv, alpha = move
    return compose(compose(pi, scale_matrix(alpha, tau)), pi_inv)


def move_set(
    ring: LieRing, z: GroupElement, extra: Iterable[GradedMatrix] = ()
) -> List[Move]:
    moves = []
    for pi in itertools.chain(lie_automorphism_generators(ring, z), extra):
        moves.append((pi, inverse(pi), line_scalar(pi, z)))
    return moves


def inner_moves(ring: LieRing) -> List[GradedMatrix]:
    moves = []
    for i in range(ring.rank):
        ad = inner_derivation(ring, ring.atype.basis(i))
        if any(ad.flat):
            moves.append(ad)
    return moves


def inner_derivation_table(ring: LieRing) -> Dict[Flat, GroupElement]:
    """ad x for every x, keyed by matrix and keeping the first x found"""

    table = {}
    for x in itertools.product(*(range(m) for m in ring.atype.moduli)):
        table.setdefault(inner_derivation(ring, x).flat, x)
    return table


def equivalent_direct(
    ring: LieRing,
    z: GroupElement,
    sigma: GradedMatrix,
    tau: GradedMatrix,
    progress: bool = False,
) -> Tuple[bool, Optional[EquivalenceWitness]]:
    """Search (π, α, x) over every automorphism fixing ⟨z⟩

    Pairs whose cyclic constructions differ in fingerprint are rejected
    before the search.
    """

    atype = ring.atype
    if sigma == tau:
        return True, EquivalenceWitness(identity_matrix(atype), 1, atype.zero())

    if _construction_fingerprint(ring, z, sigma) != _construction_fingerprint(
        ring, z, tau
    ):
        return False, None

    inner = [
        (inner_derivation(ring, x), x) for x in inner_derivation_table(ring).values()
    ]

    for pi in enumerate_lie_auts_fixing_line(ring, z, progress=progress):
        alpha = line_scalar(pi, z)
        defect = sub_matrices(
            compose(sigma, pi), compose(pi, scale_matrix(alpha, tau))
        )
        for ad, x in inner:
            if compose(pi, ad) == defect:
                return True, EquivalenceWitness(pi=pi, alpha=alpha, x=x)

    return False, None


def orbit_partition(
    ring: LieRing,
    z: GroupElement,
    listed: Sequence[GradedMatrix] = (),
    extra: Iterable[GradedMatrix] = (),
    progress: bool = False,
) -> OrbitPartition:
    """Classes of nilpotent Der(U)_z under τ ↦ π(ad x + ατ)π⁻¹"""

    logger.info(f"Enumerating derivations of '{ring}'...")
    states = enumerate_derivations_centralizing(ring, z)
    by_flat = {m.flat: m for m in states}
    ordered = sorted(by_flat)

    moves = move_set(ring, z, extra)
    shifts = inner_moves(ring)
    logger.debug(f"{len(moves)} automorphism moves, {len(shifts)} inner moves")

    class_of = {}
    sizes = []
    representatives = []

    todo = ordered
    if progress:
        todo = Bar(f"Orbits of '{ring}'", max=len(ordered)).iter(ordered)
    for start in todo:
        if start in class_of:
            continue
        cls = len(sizes)
        class_of[start] = cls
        frontier = [by_flat[start]]
        size = 1
        while frontier:
            nxt = []
            for tau in frontier:
                for image in _neighbours(tau, moves, shifts):
                    if image.flat not in by_flat:
                        raise ClosureBreakException(
                            f"Move left the derivation set of '{ring}' at {image}"
                        )
                    if image.flat not in class_of:
                        class_of[image.flat] = cls
                        nxt.append(image)
                        size += 1
            frontier = nxt
        sizes.append(size)
        representatives.append(by_flat[start])

    labels = tuple(class_of.get(m.flat) for m in listed)
    logger.info(f"Found {len(sizes)} classes for '{ring}'")

    return OrbitPartition(
        states=tuple(ordered),
        class_of=class_of,
        sizes=tuple(sizes),
        representatives=tuple(representatives),
        labels=labels,
    )


def enlarged_orbit_count(
    ring: LieRing, z: GroupElement, extra: Iterable[GradedMatrix]
) -> int:
    return orbit_partition(ring, z, extra=extra).count


def central_transitivity_check(ring: LieRing) -> bool:
    """Aut(U) is transitive on central elements of order p^μ₁"""

    atype = ring.atype
    if atype.n > ENUMERATION_CAP:
        raise TooLargeException(
            f"Transitivity is checked up to p^{ENUMERATION_CAP}, got {ring}"
        )

    top = atype.moduli[0]
    targets = {
        x for x in subgroup_elements(center(ring)) if element_order(x, atype) == top
    }
    if not targets:
        return False

    gens = lie_automorphism_generators(ring)
    start = min(targets)
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = apply(g, x)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt

    logger.debug(f"Orbit of {start} in '{ring}': {len(seen)} of {len(targets)}")
    return seen == targets


def _neighbours(tau, moves, shifts):
    for move in moves:
        yield act(move, tau)
    for ad in shifts:
        yield add_matrices(tau, ad)


def _construction_fingerprint(ring, z, sigma):
    m = 2 * ring.atype.exponents[0]
    return fingerprint(u_construction(UConstructionSpec(ring, m, sigma, z)))
