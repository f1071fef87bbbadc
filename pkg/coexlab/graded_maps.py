import itertools
import logging
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from progress.bar import Bar
from sympy.polys.domains import GF
from sympy.polys.matrices import DomainMatrix

from coexlab.liering_core import TooLargeException
from coexlab.liering_types import LieRing
from coexlab.residue_core import subgroup_closure, subgroup_contains
from coexlab.residue_types import AbelianType, GroupElement

logger = logging.getLogger(__name__)

RANDOM_ATTEMPTS = 200000


class TypeMismatchException(Exception):
    """Exception for when matrices or vectors live on different abelian types"""


class NotGradedException(Exception):
    """Exception for when an entry breaks the divisibility pattern of Hom(A, A)"""


class NotInvertibleException(Exception):
    """Exception for when a graded matrix is not invertible"""


@dataclass(frozen=True)
class GradedMatrix(object):
    """Endomorphism of ⊕ ℤ/p^{eᵢ} acting on row vectors from the right.

    Entry (i, j) is a residue mod p^{eⱼ} divisible by p^max(0, eⱼ - eᵢ).
    """

    atype: AbelianType
    entries: Tuple[Tuple[int, ...], ...]

    @property
    def flat(self) -> Tuple[int, ...]:
        return tuple(itertools.chain.from_iterable(self.entries))

    def __str__(self):
        return "[" + "; ".join(" ".join(map(str, row)) for row in self.entries) + "]"


def graded_shift(atype: AbelianType, i: int, j: int) -> int:
    return max(0, atype.exponents[j] - atype.exponents[i])


def make_matrix(atype: AbelianType, rows: Sequence[Sequence[int]]) -> GradedMatrix:
    entries = tuple(atype.reduce(row) for row in rows)

    if len(entries) != atype.rank or any(len(row) != atype.rank for row in entries):
        raise TypeMismatchException(
            f"Expected a {atype.rank}x{atype.rank} matrix for {atype.exponents}"
        )

    for i, row in enumerate(entries):
        for j, value in enumerate(row):
            if value % atype.p ** graded_shift(atype, i, j):
                raise NotGradedException(
                    f"Entry ({i + 1}, {j + 1}) = {value} must be divisible"
                    f" by p^{graded_shift(atype, i, j)}"
                )

    return GradedMatrix(atype=atype, entries=entries)


def matrix_from_flat(atype: AbelianType, flat: Sequence[int]) -> GradedMatrix:
    rank = atype.rank
    return make_matrix(atype, [flat[i * rank : (i + 1) * rank] for i in range(rank)])


def identity_matrix(atype: AbelianType) -> GradedMatrix:
    return GradedMatrix(
        atype=atype, entries=tuple(atype.basis(i) for i in range(atype.rank))
    )


def zero_matrix(atype: AbelianType) -> GradedMatrix:
    return GradedMatrix(
        atype=atype, entries=tuple(atype.zero() for _ in range(atype.rank))
    )


def elementary_matrix(atype: AbelianType, i: int, j: int, value: int) -> GradedMatrix:
    rows = [list(atype.basis(k)) for k in range(atype.rank)]
    rows[i][j] += value
    return make_matrix(atype, rows)


def diagonal_matrix(atype: AbelianType, diagonal: Sequence[int]) -> GradedMatrix:
    rows = [atype.scale(d, atype.basis(k)) for k, d in enumerate(diagonal)]
    return GradedMatrix(atype=atype, entries=tuple(rows))


def apply(m: GradedMatrix, x: GroupElement) -> GroupElement:
    atype = m.atype
    total = [0] * atype.rank
    for c, row in zip(x, m.entries):
        if c:
            total = [t + c * r for t, r in zip(total, row)]
    return atype.reduce(total)


def compose(first: GradedMatrix, second: GradedMatrix) -> GradedMatrix:
    """first then second, i.e. the matrix product first·second"""

    _check_types(first.atype, second.atype)
    return GradedMatrix(
        atype=first.atype,
        entries=tuple(apply(second, row) for row in first.entries),
    )


def apply_compose(
    m: GradedMatrix, other: Union[GradedMatrix, GroupElement]
) -> Union[GradedMatrix, GroupElement]:
    if isinstance(other, GradedMatrix):
        return compose(m, other)

    if not m.atype.is_valid(tuple(other)):
        raise TypeMismatchException(f"{other} is not an element of {m.atype.exponents}")
    return apply(m, other)


def add_matrices(first: GradedMatrix, second: GradedMatrix) -> GradedMatrix:
    _check_types(first.atype, second.atype)
    atype = first.atype
    return GradedMatrix(
        atype=atype,
        entries=tuple(atype.add(a, b) for a, b in zip(first.entries, second.entries)),
    )


def scale_matrix(k: int, m: GradedMatrix) -> GradedMatrix:
    atype = m.atype
    return GradedMatrix(
        atype=atype, entries=tuple(atype.scale(k, row) for row in m.entries)
    )


def sub_matrices(first: GradedMatrix, second: GradedMatrix) -> GradedMatrix:
    return add_matrices(first, scale_matrix(-1, second))


def commutator(first: GradedMatrix, second: GradedMatrix) -> GradedMatrix:
    return sub_matrices(compose(first, second), compose(second, first))


def matrix_power(m: GradedMatrix, k: int) -> GradedMatrix:
    result = identity_matrix(m.atype)
    for _ in range(k):
        result = compose(result, m)
    return result


def is_derivation(ring: LieRing, m: GradedMatrix) -> bool:
    atype = ring.atype
    basis = [atype.basis(i) for i in range(atype.rank)]
    images = m.entries

    return all(
        apply(m, ring.brackets[i][j])
        == atype.add(
            ring.bracket(images[i], basis[j]), ring.bracket(basis[i], images[j])
        )
        for i, j in itertools.combinations(range(atype.rank), 2)
    )


def inner_derivation(ring: LieRing, x: GroupElement) -> GradedMatrix:
    """Matrix of y ↦ [y, x]"""

    atype = ring.atype
    return GradedMatrix(
        atype=atype,
        entries=tuple(ring.bracket(atype.basis(i), x) for i in range(atype.rank)),
    )


def is_nilpotent_endo(m: GradedMatrix) -> bool:
    """M^t = 0 for t = Σeᵢ, the longest possible chain"""

    power = matrix_power(m, m.atype.n)
    return not any(power.flat)


def mod_p_rank(m: GradedMatrix) -> int:
    return _mod_p_domain_matrix(m).rank()


def mod_p_invertible(m: GradedMatrix) -> bool:
    return mod_p_rank(m) == m.atype.rank


def fixes_line(m: GradedMatrix, z: GroupElement) -> bool:
    return subgroup_contains(subgroup_closure([z], m.atype), apply(m, z))


def is_lie_automorphism(
    ring: LieRing, m: GradedMatrix, fix_line: Optional[GroupElement] = None
) -> bool:
    if not mod_p_invertible(m):
        return False

    images = m.entries
    for i, j in itertools.combinations(range(ring.rank), 2):
        if ring.bracket(images[i], images[j]) != apply(m, ring.brackets[i][j]):
            return False

    return fix_line is None or fixes_line(m, fix_line)


def inverse(m: GradedMatrix) -> GradedMatrix:
    """Newton lifting of the mod-p inverse, X ↦ X(2 - MX)"""

    atype = m.atype
    p = atype.p

    if not mod_p_invertible(m):
        raise NotInvertibleException(f"{m} is singular modulo {p}")

    reduced_inverse = _mod_p_domain_matrix(m).inv().to_Matrix()
    approx = make_matrix(
        atype,
        [
            [int(reduced_inverse[i, j]) % p for j in range(atype.rank)]
            for i in range(atype.rank)
        ],
    )

    one = identity_matrix(atype)
    two = scale_matrix(2, one)
    for _ in range(atype.exponents[0] + 1):
        if compose(m, approx) == one:
            return approx
        approx = compose(approx, sub_matrices(two, compose(m, approx)))

    if compose(m, approx) == one:
        return approx
    raise NotInvertibleException(f"Newton lifting did not converge for {m}")


def lie_automorphism_generators(
    ring: LieRing, fix_line: Optional[GroupElement] = None
) -> List[GradedMatrix]:
    """Elementary bumps I + p^v·Eᵢⱼ at the least admissible v, plus diagonals"""

    atype = ring.atype
    gens = []

    for i, j in itertools.permutations(range(atype.rank), 2):
        for v in range(graded_shift(atype, i, j), atype.exponents[j]):
            bump = elementary_matrix(atype, i, j, atype.p**v)
            if is_lie_automorphism(ring, bump, fix_line):
                gens.append(bump)
                break

    gens.extend(_diagonal_generators(ring, fix_line))
    logger.debug(f"Automorphism generators of {ring}: {len(gens)}")
    return gens


def random_lie_automorphism(ring: LieRing, z: GroupElement, rng) -> GradedMatrix:
    """Rejection sampling over graded matrices that map z into ⟨z⟩"""

    atype = ring.atype
    line_index = _basis_index(z, atype.p)

    for _ in range(RANDOM_ATTEMPTS):
        rows = []
        for i in range(atype.rank):
            if i == line_index:
                rows.append(atype.scale(rng.randrange(atype.moduli[i]), atype.basis(i)))
                continue
            rows.append(
                tuple(
                    atype.p ** graded_shift(atype, i, j)
                    * rng.randrange(atype.p ** min(atype.exponents[i], e))
                    for j, e in enumerate(atype.exponents)
                )
            )
        candidate = make_matrix(atype, rows)
        if is_lie_automorphism(ring, candidate, z):
            return candidate

    raise TooLargeException(
        f"No automorphism of {ring} found in {RANDOM_ATTEMPTS} samples"
    )


def generated_group_order(
    gens: Iterable[GradedMatrix], cap: Optional[int] = None, progress: bool = False
) -> int:
    gens = list(gens)
    if not gens:
        return 1

    start = identity_matrix(gens[0].atype)
    seen = {start.flat}
    frontier = [start]

    bar = Bar("Closing matrix group", max=cap or 0) if progress else None
    while frontier:
        nxt = []
        for m in frontier:
            for g in gens:
                prod = compose(m, g)
                if prod.flat not in seen:
                    seen.add(prod.flat)
                    nxt.append(prod)
                    if bar:
                        bar.next()
        if cap is not None and len(seen) > cap:
            raise TooLargeException(f"Matrix group exceeds {cap} elements")
        frontier = nxt

    if bar:
        bar.finish()
    return len(seen)


def _diagonal_generators(ring, fix_line):
    atype = ring.atype
    unit_ranges = [
        [u for u in range(1, m) if u % atype.p] for m in atype.moduli
    ]

    autos = [
        diag
        for diag in itertools.product(*unit_ranges)
        if is_lie_automorphism(ring, diagonal_matrix(atype, diag), fix_line)
    ]

    gens = []
    closure = {(1,) * atype.rank}
    for diag in autos:
        if diag in closure:
            continue
        gens.append(diag)
        closure = _diagonal_closure(gens, atype.moduli)

    return [diagonal_matrix(atype, diag) for diag in gens]


def _diagonal_closure(gens, moduli):
    seen = {(1,) * len(moduli)}
    frontier = list(seen)
    while frontier:
        nxt = []
        for d in frontier:
            for g in gens:
                prod = tuple(a * b % m for a, b, m in zip(d, g, moduli))
                if prod not in seen:
                    seen.add(prod)
                    nxt.append(prod)
        frontier = nxt
    return seen


def _basis_index(z: GroupElement, p: int) -> Optional[int]:
    support = [i for i, c in enumerate(z) if c]
    if len(support) == 1 and z[support[0]] % p:
        return support[0]
    return None


def _mod_p_domain_matrix(m: GradedMatrix) -> DomainMatrix:
    field = GF(m.atype.p)
    rank = m.atype.rank
    return DomainMatrix(
        [[field(value % m.atype.p) for value in row] for row in m.entries],
        (rank, rank),
        field,
    )


def _check_types(first: AbelianType, second: AbelianType):
    if first != second:
        raise TypeMismatchException(
            f"Types {first.exponents} and {second.exponents} differ"
        )
