import itertools
from typing import Iterable, List, Optional, Sequence, Tuple

from sympy import legendre_symbol, mod_inverse
from sympy.ntheory import primitive_root as sympy_primitive_root

from coexlab.residue_types import (
    AbelianType,
    GroupElement,
    PrimePower,
    SubgroupBasis,
    TypeInvariants,
)


class NotAUnitException(Exception):
    """Exception for when a residue has no inverse modulo a prime power"""


def unit_inverse(a: int, m: PrimePower) -> int:
    if a % m.p == 0:
        raise NotAUnitException(f"{a} is not a unit modulo {m.p}^{m.k}")

    return int(mod_inverse(a, m.modulus))


def quadratic_character(a: int, p: int) -> int:
    return int(legendre_symbol(a % p, p))


def primitive_root(p: int) -> int:
    return int(sympy_primitive_root(p))


def least_nonresidue(p: int) -> int:
    return next(a for a in range(2, p) if quadratic_character(a, p) == -1)


def valuation(a: int, k: int, p: int) -> int:
    """p-adic valuation of a residue mod p^k, k for zero"""

    a %= p**k
    if a == 0:
        return k

    v = 0
    while a % p == 0:
        a //= p
        v += 1
    return v


def element_order(x: GroupElement, atype: AbelianType) -> int:
    log_order = max(
        (e - valuation(c, e, atype.p) for c, e in zip(x, atype.exponents)),
        default=0,
    )
    return atype.p**log_order


def dual_partition(parts: Sequence[int]) -> Tuple[int, ...]:
    if not parts:
        return ()

    return tuple(sum(1 for m in parts if m >= i) for i in range(1, max(parts) + 1))


def type_invariants(atype: AbelianType) -> TypeInvariants:
    return TypeInvariants(mu=atype.exponents, omega=dual_partition(atype.exponents))


def subgroup_closure(
    gens: Iterable[GroupElement], atype: AbelianType
) -> SubgroupBasis:
    rows, pivots, exponents = echelon_rows(
        [atype.reduce(g) for g in gens], atype.exponents, atype.p
    )

    return SubgroupBasis(
        atype=atype,
        rows=tuple(rows),
        pivots=tuple(pivots),
        exponents=tuple(exponents),
    )


def subgroup_coordinates(
    sub: SubgroupBasis, x: GroupElement
) -> Optional[Tuple[int, ...]]:
    """Coefficients of x in the echelon rows, None if x is outside"""

    atype = sub.atype
    rest = atype.reduce(x)
    coeffs = []

    for row, col, exp in zip(sub.rows, sub.pivots, sub.exponents):
        step = row[col]
        if rest[col] % step:
            return None
        k = rest[col] // step
        coeffs.append(k % atype.p**exp)
        rest = atype.sub(rest, atype.scale(k, row))

    if any(rest):
        return None

    return tuple(coeffs)


def subgroup_contains(sub: SubgroupBasis, x: GroupElement) -> bool:
    return subgroup_coordinates(sub, x) is not None


def subgroup_elements(sub: SubgroupBasis) -> Iterable[GroupElement]:
    atype = sub.atype
    ranges = [range(atype.p**exp) for exp in sub.exponents]

    for coeffs in itertools.product(*ranges):
        x = atype.zero()
        for k, row in zip(coeffs, sub.rows):
            if k:
                x = atype.add(x, atype.scale(k, row))
        yield x


def subgroup_is_subset(small: SubgroupBasis, big: SubgroupBasis) -> bool:
    return all(subgroup_contains(big, row) for row in small.rows)


def subgroup_intersection(a: SubgroupBasis, b: SubgroupBasis) -> SubgroupBasis:
    if a.order > b.order:
        a, b = b, a  # noqa: WPS414

    common = [x for x in subgroup_elements(a) if subgroup_contains(b, x)]
    return subgroup_closure(common, a.atype)


def hom_kernel(
    images: Sequence[GroupElement],
    source: AbelianType,
    target_exponents: Sequence[int],
) -> SubgroupBasis:
    """Kernel of the additive map sending source.basis(i) to images[i]

    The target is ⊕ ℤ/p^{e} over target_exponents, in any order.
    """

    target_exponents = tuple(target_exponents)
    width = len(target_exponents)
    graph = [tuple(image) + source.basis(i) for i, image in enumerate(images)]
    rows, pivots, _ = echelon_rows(
        graph, target_exponents + source.exponents, source.p
    )

    kernel_gens = [row[width:] for row, col in zip(rows, pivots) if col >= width]
    return subgroup_closure(kernel_gens, source)


def omega_layer(atype: AbelianType, i: int) -> SubgroupBasis:
    gens = [
        atype.scale(atype.p ** max(0, e - i), atype.basis(j))
        for j, e in enumerate(atype.exponents)
    ]
    return subgroup_closure(gens, atype)


def agemo_layer(atype: AbelianType, i: int) -> SubgroupBasis:
    gens = [atype.scale(atype.p**i, atype.basis(j)) for j in range(atype.rank)]
    return subgroup_closure(gens, atype)


def echelon_rows(pool: List[GroupElement], exponents: Sequence[int], p: int):
    moduli = [p**e for e in exponents]
    pool = [tuple(c % m for c, m in zip(row, moduli)) for row in pool]
    pool = [row for row in pool if any(row)]

    rows, pivots, pivot_exponents = [], [], []

    for col, e in enumerate(exponents):
        candidates = [row for row in pool if row[col]]
        if not candidates:
            continue

        chosen = min(
            range(len(pool)),
            key=lambda idx: valuation(pool[idx][col], e, p),
        )
        v = valuation(pool[chosen][col], e, p)
        unit = pool[chosen][col] // p**v
        pivot = _scale(int(mod_inverse(unit, p**e)), pool[chosen], moduli)

        next_pool = []
        for idx, row in enumerate(pool):
            if idx == chosen:
                continue
            if row[col]:
                row = _axpy(-(row[col] // p**v), pivot, row, moduli)
            if any(row):
                next_pool.append(row)

        # rows left in the pool must span everything with zeros up to col
        killed = _scale(p ** (e - v), pivot, moduli)
        if any(killed):
            next_pool.append(killed)

        rows.append(pivot)
        pivots.append(col)
        pivot_exponents.append(e - v)
        pool = next_pool

    for i, row in enumerate(rows):
        for j in range(i + 1, len(rows)):
            step = rows[j][pivots[j]]
            k = row[pivots[j]] // step
            if k:
                row = _axpy(-k, rows[j], row, moduli)
        rows[i] = row

    return rows, pivots, pivot_exponents


def _scale(k, row, moduli):
    return tuple(k * c % m for c, m in zip(row, moduli))


def _axpy(k, x, y, moduli):
    return tuple((k * a + b) % m for a, b, m in zip(x, y, moduli))
