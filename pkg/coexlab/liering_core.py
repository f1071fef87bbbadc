import itertools
import logging
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import mod_inverse

from coexlab.liering_types import LieRing, RingFingerprint
from coexlab.residue_core import (
    agemo_layer,
    echelon_rows,
    element_order,
    hom_kernel,
    subgroup_closure,
    subgroup_contains,
    subgroup_intersection,
    subgroup_is_subset,
    type_invariants,
    valuation,
)
from coexlab.residue_types import AbelianType, GroupElement, SubgroupBasis

logger = logging.getLogger(__name__)

ISOMORPHISM_CAP = 5


class OrderIncompatException(Exception):
    """Exception for when a bracket value outlives the smaller generator order"""

    def __init__(self, pair):
        super().__init__(
            f"p^min(e{pair[0] + 1}, e{pair[1] + 1}) does not kill"
            f" [x{pair[0] + 1}, x{pair[1] + 1}]"
        )
        self.pair = pair


class JacobiFailException(Exception):
    """Exception for when the Jacobi identity fails on a generator triple"""

    def __init__(self, triple):
        i, j, k = (t + 1 for t in triple)
        super().__init__(f"Jacobi identity fails on (x{i}, x{j}, x{k})")
        self.triple = triple


class NotNilpotentException(Exception):
    """Exception for when the lower central series stabilizes above zero"""


class NotAnIdealException(Exception):
    """Exception for when a subgroup is not closed under bracketing with the ring"""


class NoPureBasisException(Exception):
    """Exception for when a quotient has no basis made of images of generators"""


class TooLargeException(Exception):
    """Exception for when an exhaustive search exceeds its size cap"""


def make_liering(
    atype: AbelianType,
    table: Dict[Tuple[int, int], GroupElement],
    name: str = "",
    check: bool = True,
) -> LieRing:
    """Build a ring from {(i, j): [xᵢ, xⱼ]} with zero-based indices

    Missing pairs bracket to zero, (j, i) entries are negated into (i, j).
    """

    rank = atype.rank
    full = [[atype.zero() for _ in range(rank)] for _ in range(rank)]

    for (i, j), value in table.items():
        if i == j:
            if any(atype.reduce(value)):
                raise ValueError(f"[x{i + 1}, x{i + 1}] must vanish")
            continue
        value = atype.reduce(value)
        full[i][j] = value
        full[j][i] = atype.neg(value)

    ring = LieRing(
        atype=atype,
        brackets=tuple(tuple(row) for row in full),
        name=name,
    )

    if check:
        validate(ring)

    return ring


def abelian_ring(atype: AbelianType, name: str = "") -> LieRing:
    return make_liering(atype, {}, name=name, check=False)


def validate(ring: LieRing) -> bool:
    atype = ring.atype
    exponents = atype.exponents

    for i, j in itertools.combinations(range(atype.rank), 2):
        killer = atype.p ** min(exponents[i], exponents[j])
        if any(atype.scale(killer, ring.brackets[i][j])):
            raise OrderIncompatException((i, j))

    basis = [atype.basis(i) for i in range(atype.rank)]
    for i, j, k in itertools.combinations(range(atype.rank), 3):
        x, y, w = basis[i], basis[j], basis[k]
        total = atype.add(
            ring.bracket(ring.bracket(x, y), w),
            atype.add(
                ring.bracket(ring.bracket(y, w), x),
                ring.bracket(ring.bracket(w, x), y),
            ),
        )
        if any(total):
            raise JacobiFailException((i, j, k))

    return True


def derived_subring(ring: LieRing) -> SubgroupBasis:
    return subgroup_closure([value for _, _, value in ring.nonzero_pairs], ring.atype)


def lower_central_series(ring: LieRing) -> List[SubgroupBasis]:
    """γ₁ ⊇ γ₂ ⊇ … up to the first zero term, or up to stabilization"""

    atype = ring.atype
    term = subgroup_closure([atype.basis(i) for i in range(atype.rank)], atype)
    series = [term]

    while term.order > 1:
        nxt = subgroup_closure(
            [
                ring.bracket(row, atype.basis(j))
                for row in term.rows
                for j in range(atype.rank)
            ],
            atype,
        )
        series.append(nxt)
        if nxt.order == term.order:
            break
        term = nxt

    return series


def nilpotency_class(ring: LieRing) -> int:
    series = lower_central_series(ring)
    if series[-1].order > 1:
        raise NotNilpotentException(
            f"Lower central series of {ring} stops at order {series[-1].order}"
        )

    return len(series) - 1


def center(ring: LieRing) -> SubgroupBasis:
    atype = ring.atype
    images = [
        tuple(
            itertools.chain.from_iterable(
                ring.brackets[i][j] for j in range(atype.rank)
            )
        )
        for i in range(atype.rank)
    ]
    return hom_kernel(images, atype, atype.exponents * atype.rank)


def fingerprint(ring: LieRing) -> RingFingerprint:
    atype = ring.atype
    cls = nilpotency_class(ring)
    derived = derived_subring(ring)
    ring_center = center(ring)

    if derived.order == 1:
        depth = atype.exponents[0] if atype.rank else 0
    else:
        depth = max(
            i
            for i in range(atype.exponents[0] + 1)
            if subgroup_is_subset(derived, agemo_layer(atype, i))
        )

    center_powers = subgroup_closure(
        [atype.scale(atype.p, row) for row in ring_center.rows], atype
    )

    return RingFingerprint(
        n=atype.n,
        invariants=type_invariants(atype),
        nilpotency_class=cls,
        derived_order=derived.order,
        center_order=ring_center.order,
        derived_agemo_depth=depth,
        derived_center_power_order=subgroup_intersection(
            derived, center_powers
        ).order,
    )


def is_ideal(ring: LieRing, ideal: SubgroupBasis) -> bool:
    atype = ring.atype
    return all(
        subgroup_contains(ideal, ring.bracket(row, atype.basis(j)))
        for row in ideal.rows
        for j in range(atype.rank)
    )


def quotient(ring: LieRing, ideal: SubgroupBasis, name: str = "") -> LieRing:
    return quotient_projection(ring, ideal, name=name)[0]


def quotient_projection(
    ring: LieRing, ideal: SubgroupBasis, name: str = ""
) -> Tuple[LieRing, List[GroupElement]]:
    """Quotient ring together with the images of the old basis vectors"""

    if not is_ideal(ring, ideal):
        raise NotAnIdealException(f"Subgroup is not an ideal of {ring}")

    atype = ring.atype
    p = atype.p
    exponents = list(atype.exponents)
    rank = atype.rank

    if ideal.order == 1:
        return ring, [atype.basis(i) for i in range(rank)]

    live = list(range(rank))
    relations = [list(row) for row in ideal.rows]
    exprs = [list(atype.basis(i)) for i in range(rank)]

    def reduce_live(vec):  # noqa: WPS430
        return [c % p ** exponents[i] if i in live else 0 for i, c in enumerate(vec)]

    while True:
        found = _unit_relation(relations, live, p)
        if found is None:
            break
        idx, k = found

        sub = relations.pop(idx)
        sub = [c * int(mod_inverse(sub[k], p ** exponents[k])) for c in sub]
        sub[k] = 1

        relations = [_eliminate(rel, sub, k) for rel in relations]
        exprs = [_eliminate(expr, sub, k) for expr in exprs]
        relations.append(
            [-(p ** exponents[k]) * c if i != k else 0 for i, c in enumerate(sub)]
        )

        live.remove(k)
        relations = [rel for rel in map(reduce_live, relations) if any(rel)]
        exprs = [reduce_live(expr) for expr in exprs]

    live_exponents = [exponents[i] for i in live]
    rows, pivots, _ = echelon_rows(
        [[rel[i] for i in live] for rel in relations], live_exponents, p
    )

    new_exponents = dict(zip(live, live_exponents))
    for row, col in zip(rows, pivots):
        support = [i for i, c in enumerate(row) if c]
        if support != [col]:
            raise NoPureBasisException(
                f"Relation {tuple(row)} mixes coordinates {support}"
            )
        new_exponents[live[col]] = valuation(row[col], live_exponents[col], p)

    kept = [i for i in live if new_exponents[i] > 0]
    kept.sort(key=lambda i: -new_exponents[i])
    new_type = AbelianType(p, tuple(new_exponents[i] for i in kept))

    def project(vec):  # noqa: WPS430
        total = [0] * rank
        for i, c in enumerate(vec):
            if c:
                total = [t + c * e for t, e in zip(total, exprs[i])]
        return new_type.reduce([total[i] for i in kept])

    images = [project(atype.basis(i)) for i in range(rank)]
    table = {}
    for a, b in itertools.combinations(range(len(kept)), 2):
        value = project(ring.brackets[kept[a]][kept[b]])
        if any(value):
            table[(a, b)] = value

    result = make_liering(new_type, table, name=name, check=False)
    if result.order * ideal.order != ring.order:
        raise NoPureBasisException(
            f"Quotient of {ring} has order {result.order},"
            f" expected {ring.order // ideal.order}"
        )

    return result, images


def omega_subring(ring: LieRing, i: int, name: str = "") -> LieRing:
    """Ωᵢ(L) on the basis p^max(0, eⱼ - i)·xⱼ"""

    atype = ring.atype
    p = atype.p
    shifts = [max(0, e - i) for e in atype.exponents]
    kept = [j for j, e in enumerate(atype.exponents) if min(e, i) > 0]
    new_type = AbelianType(p, tuple(min(atype.exponents[j], i) for j in kept))

    table = {}
    for a, b in itertools.combinations(range(len(kept)), 2):
        ja, jb = kept[a], kept[b]
        value = atype.scale(p ** (shifts[ja] + shifts[jb]), ring.brackets[ja][jb])
        coords = []
        for j in kept:
            if value[j] % p ** shifts[j]:
                raise NotAnIdealException(f"Ω{i} of {ring} is not closed")
            coords.append(value[j] // p ** shifts[j])
        if any(new_type.reduce(coords)):
            table[(a, b)] = coords

    return make_liering(new_type, table, name=name, check=False)


def central_power_quotient(ring: LieRing) -> LieRing:
    """Quotient by ⟨p^μ₂·x₁⟩, which has type (μ₂, μ₂, μ₃, …)"""

    atype = ring.atype
    if atype.rank < 2:
        return ring

    element = atype.scale(atype.p ** atype.exponents[1], atype.basis(0))
    return quotient(ring, subgroup_closure([element], atype), name=ring.name)


def isomorphic_small(
    first: LieRing, second: LieRing
) -> Tuple[bool, Optional[Tuple[GroupElement, ...]]]:
    """Search for an isomorphism, returned as the images of the basis of first"""

    if first.atype != second.atype:
        return False, None

    atype = first.atype
    if atype.n > ISOMORPHISM_CAP:
        raise TooLargeException(
            f"Isomorphism search is capped at p^{ISOMORPHISM_CAP}, got p^{atype.n}"
        )

    first_print = _safe_fingerprint(first)
    if first_print != _safe_fingerprint(second):
        logger.debug(f"Fingerprints of {first} and {second} differ")
        return False, None

    first_sigs = _signatures(first)
    second_sigs = _signatures(second)
    elements = list(second_sigs)

    candidates = []
    for i in range(atype.rank):
        wanted = first_sigs[atype.basis(i)]
        own = atype.basis(i)
        options = [y for y in elements if second_sigs[y] == wanted]
        options.sort(key=lambda y: y != own)
        candidates.append(options)

    pair_checks = pair_schedule(first)
    rows = _extend_rows(first, second, candidates, pair_checks, [])
    if rows is None:
        return False, None

    return True, tuple(rows)


def apply_rows(rows: Sequence[GroupElement], x: GroupElement, atype: AbelianType):
    total = [0] * atype.rank
    for c, row in zip(x, rows):
        if c:
            total = [t + c * r for t, r in zip(total, row)]
    return atype.reduce(total)


def _extend_rows(first, second, candidates, pair_checks, rows):
    atype = first.atype
    idx = len(rows)

    if idx == atype.rank:
        if subgroup_closure(rows, atype).order == atype.order:
            return rows
        return None

    needed = atype.p ** sum(atype.exponents[: idx + 1])
    for y in candidates[idx]:
        trial = rows + [y]
        if subgroup_closure(trial, atype).order != needed:
            continue
        if not all(
            second.bracket(trial[a], trial[b])
            == apply_rows(trial, first.brackets[a][b], atype)
            for a, b in pair_checks[idx]
        ):
            continue
        found = _extend_rows(first, second, candidates, pair_checks, trial)
        if found is not None:
            return found

    return None


def pair_schedule(ring: LieRing) -> List[List[Tuple[int, int]]]:
    """Pairs whose check becomes possible once rows up to index i are set"""

    rank = ring.rank
    schedule = [[] for _ in range(rank)]
    for a, b in itertools.combinations(range(rank), 2):
        support = [i for i, c in enumerate(ring.brackets[a][b]) if c]
        schedule[max([b] + support)].append((a, b))
    return schedule


def _signatures(ring: LieRing) -> Dict[GroupElement, Tuple[int, bool, bool, int]]:
    atype = ring.atype
    ring_center = center(ring)
    derived = derived_subring(ring)

    sigs = {}
    for x in itertools.product(*(range(m) for m in atype.moduli)):
        image = subgroup_closure(
            [ring.bracket(x, atype.basis(j)) for j in range(atype.rank)], atype
        )
        sigs[x] = (
            element_order(x, atype),
            subgroup_contains(ring_center, x),
            subgroup_contains(derived, x),
            image.order,
        )
    return sigs


def _safe_fingerprint(ring: LieRing) -> Optional[RingFingerprint]:
    try:
        return fingerprint(ring)
    except NotNilpotentException:
        return None


def _unit_relation(relations, live, p):
    for idx, rel in enumerate(relations):
        for k in live:
            if rel[k] % p:
                return idx, k
    return None


def _eliminate(vec, sub, k):
    coeff = vec[k]
    if not coeff:
        return vec
    return [c - coeff * s for c, s in zip(vec, sub)]


