import itertools
import logging
from typing import Iterator, List

from progress.bar import Bar

from coexlab.graded_maps import (
    GradedMatrix,
    apply,
    graded_shift,
    is_nilpotent_endo,
)
from coexlab.liering_core import TooLargeException, apply_rows, pair_schedule
from coexlab.liering_types import LieRing
from coexlab.residue_core import (
    hom_kernel,
    subgroup_closure,
    subgroup_contains,
    subgroup_elements,
)
from coexlab.residue_types import AbelianType, GroupElement

logger = logging.getLogger(__name__)

ENUMERATION_CAP = 5


def entry_values(atype: AbelianType, i: int, j: int) -> range:
    step = atype.p ** graded_shift(atype, i, j)
    return range(0, atype.moduli[j], step)


def row_values(atype: AbelianType, i: int) -> Iterator[GroupElement]:
    return itertools.product(*(entry_values(atype, i, j) for j in range(atype.rank)))


def enumerate_derivations_centralizing(
    ring: LieRing, z: GroupElement, nilpotent_only: bool = True
) -> List[GradedMatrix]:
    """Derivations M with z·M = 0, solved as the kernel of the Leibniz defect"""

    atype = ring.atype
    _check_cap(atype)

    coords = sorted(
        itertools.product(range(atype.rank), repeat=2),
        key=lambda ij: -min(atype.exponents[ij[0]], atype.exponents[ij[1]]),
    )
    source = AbelianType(
        atype.p,
        tuple(min(atype.exponents[i], atype.exponents[j]) for i, j in coords),
    )

    pairs = list(itertools.combinations(range(atype.rank), 2))
    images = [_leibniz_defect(ring, z, i, j, pairs) for i, j in coords]
    kernel = hom_kernel(images, source, atype.exponents * (len(pairs) + 1))

    logger.debug(f"Centralizing derivations of {ring}: {kernel.order}")

    result = []
    for vec in subgroup_elements(kernel):
        rows = [[0] * atype.rank for _ in range(atype.rank)]
        for (i, j), t in zip(coords, vec):
            rows[i][j] = t * atype.p ** graded_shift(atype, i, j)
        m = GradedMatrix(atype=atype, entries=tuple(tuple(row) for row in rows))
        if not nilpotent_only or is_nilpotent_endo(m):
            result.append(m)

    return result


def enumerate_lie_auts_fixing_line(
    ring: LieRing, z: GroupElement, progress: bool = False
) -> Iterator[GradedMatrix]:
    """Lazily yield every Lie automorphism M with z·M ∈ ⟨z⟩"""

    atype = ring.atype
    _check_cap(atype)

    line = subgroup_closure([z], atype)
    line_row = max(i for i, c in enumerate(z) if c) if any(z) else -1
    options = [list(row_values(atype, i)) for i in range(atype.rank)]
    schedule = pair_schedule(ring)
    reduced_type = AbelianType(atype.p, (1,) * atype.rank)

    first_options = [row for row in options[0] if any(c % atype.p for c in row)]
    if progress:
        bar = Bar(f"Automorphisms of {ring}", max=len(first_options))
        first_options = bar.iter(first_options)

    for first in first_options:
        yield from _extend_automorphism(
            ring,
            [first],
            options,
            schedule,
            z,
            line,
            line_row,
            reduced_type,
        )


def _extend_automorphism(  # noqa: WPS211
    ring, rows, options, schedule, z, line, line_row, reduced_type
):
    atype = ring.atype
    idx = len(rows) - 1

    for a, b in schedule[idx]:
        if ring.bracket(rows[a], rows[b]) != apply_rows(
            rows, ring.brackets[a][b], atype
        ):
            return

    if idx == line_row and not subgroup_contains(line, apply_rows(rows, z, atype)):
        return

    if len(rows) == atype.rank:
        yield GradedMatrix(atype=atype, entries=tuple(rows))
        return

    span = set(
        subgroup_elements(
            subgroup_closure(
                [tuple(c % atype.p for c in row) for row in rows], reduced_type
            )
        )
    )
    for row in options[len(rows)]:
        if tuple(c % atype.p for c in row) in span:
            continue
        yield from _extend_automorphism(
            ring, rows + [row], options, schedule, z, line, line_row, reduced_type
        )


def _leibniz_defect(ring, z, i, j, pairs):
    atype = ring.atype
    unit = [[0] * atype.rank for _ in range(atype.rank)]
    unit[i][j] = atype.p ** graded_shift(atype, i, j)
    m = GradedMatrix(atype=atype, entries=tuple(tuple(row) for row in unit))

    defect = []
    for a, b in pairs:
        lhs = apply(m, ring.brackets[a][b])
        rhs = atype.add(
            ring.bracket(m.entries[a], atype.basis(b)),
            ring.bracket(atype.basis(a), m.entries[b]),
        )
        defect.extend(atype.sub(lhs, rhs))
    defect.extend(apply(m, z))
    return tuple(defect)


def _check_cap(atype):
    if atype.n > ENUMERATION_CAP:
        raise TooLargeException(
            f"Enumeration is capped at p^{ENUMERATION_CAP}, got p^{atype.n}"
        )
