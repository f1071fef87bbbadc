import collections
import itertools
import logging
import math
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from progress.bar import Bar
from sympy import multiplicity

from coexlab.census_type3 import (
    V_EXPONENT,
    census_type3,
    check_range,
    type3_check,
    type3_table,
)
from coexlab.census_types import CensusRecord, Partition, Provenance
from coexlab.constructions import (
    SpecViolationException,
    UConstructionSpec,
    ring_221,
    u_construction,
)
from coexlab.equivalence_engine import orbit_partition
from coexlab.graded_maps import GradedMatrix, make_matrix
from coexlab.group_types import CheckReport, make_report
from coexlab.liering_core import fingerprint, isomorphic_small
from coexlab.liering_types import LieRing
from coexlab.residue_core import least_nonresidue, primitive_root
from coexlab.residue_types import AbelianType, GroupElement

logger = logging.getLogger(__name__)

# Groups of order p^5 with type (2, 1, 1, 1), from the published classification
SMALL_GROUPS_CITATION = "order p^5 classification, type (2,1,1,1) count"

Representative = Tuple[LieRing, GradedMatrix]


class MismatchException(Exception):
    """Exception for when a computed count disagrees with the expected one"""


class UnsupportedPartitionException(Exception):
    """Exception for when a partition of 3 has no census pipeline"""


def transversal_221(p: int) -> Tuple[LieRing, LieRing, LieRing]:
    """V, W, X on (ℤ/p²)z ⊕ (ℤ/p²)u₁ ⊕ (ℤ/p)u₂"""

    rings = (
        ring_221(p, 0, 1, name="V"),
        ring_221(p, 1, 0, name="W"),
        ring_221(p, 0, 0, name="X"),
    )

    for first, second in itertools.combinations(rings, 2):
        same, _ = isomorphic_small(first, second)
        if same:
            raise MismatchException(f"{first} and {second} are isomorphic")

    return rings


def census_z(ring: LieRing) -> GroupElement:
    return ring.atype.basis(0)


def expected_orbit_counts(p: int) -> Dict[str, int]:
    return {"V": 2 * p + 1, "W": 3 * p + 11, "X": 18}


def representatives_221(p: int) -> List[Representative]:
    v_ring, w_ring, x_ring = transversal_221(p)
    listed = _listed_matrices(p)

    return [
        (ring, matrix)
        for ring in (v_ring, w_ring, x_ring)
        for matrix in listed[ring.name]
    ]


def verify_221(
    p: int,
    reps: Optional[Sequence[Representative]] = None,
    progress: bool = False,
) -> CheckReport:
    """Orbit counts, listed representatives and the 5p + 30 total"""

    reps = representatives_221(p) if reps is None else reps
    expected = expected_orbit_counts(p)

    failures = []
    total = 0
    for ring in transversal_221(p):
        listed = [m for r, m in reps if r.name == ring.name]
        partition = orbit_partition(ring, census_z(ring), listed, progress=progress)
        total += partition.count

        if partition.count != expected[ring.name]:
            failures.append(
                f"{ring}: {partition.count} classes, expected {expected[ring.name]}"
            )
        if sum(partition.sizes) != len(partition.states):
            failures.append(f"{ring}: orbit sizes do not sum to the state count")

        labels = partition.labels
        if None in labels:
            failures.append(f"{ring}: a listed matrix is not a centralizing derivation")
        elif len(set(labels)) != len(labels):
            failures.append(f"{ring}: listed representatives share a class")
        elif len(labels) != partition.count:
            failures.append(
                f"{ring}: {len(labels)} listed representatives"
                f" for {partition.count} classes"
            )

    if total != 5 * p + 30:
        failures.append(f"total {total}, expected {5 * p + 30}")

    return make_report(f"(2,1) census p={p}", failures, total)


def census_221(p: int, n: int, progress: bool = False) -> List[CensusRecord]:
    check_range(p, n)
    m = n - 3

    reps = representatives_221(p)
    if progress:
        reps = Bar("Constructing (2,1) rings", max=len(reps)).iter(reps)

    records = []
    for ring, sigma in reps:
        z = census_z(ring)
        built = u_construction(UConstructionSpec(ring, m, sigma, z))
        records.append(
            CensusRecord(
                p=p,
                n=n,
                partition=(2, 1),
                ring=built,
                fingerprint=fingerprint(built),
                provenance=Provenance(base=ring.name, sigma=sigma, z=z, m=m),
            )
        )

    logger.info(f"Built {len(records)} rings of type (2,1) at p={p}, n={n}")
    return sorted(records, key=CensusRecord.sort_key)


def census(p: int, n: int, partitions: Iterable[Partition]) -> List[CensusRecord]:
    records = []
    for partition in partitions:
        if partition == (2, 1):
            records.extend(census_221(p, n))
        elif partition == (3,):
            records.extend(census_type3(p, n))
        else:
            raise UnsupportedPartitionException(
                f"No ring records for partition {_partition_name(partition)}"
            )
    return records


def class_histogram(records: Iterable[CensusRecord]) -> Dict[int, int]:
    counts = collections.Counter(r.nilpotency_class for r in records)
    return dict(sorted(counts.items()))


def psi_part(p: int, n: int, partition: Partition, verified: bool = False) -> int:
    check_range(p, n)

    if partition == (1, 1, 1):
        return 23 + 2 * math.gcd(p - 1, 3) + math.gcd(p - 1, 4)

    if partition == (2, 1):
        if not verified:
            return len(representatives_221(p))
        report = verify_221(p)
        if not report.passed:
            raise MismatchException("; ".join(report.failures))
        return sum(1 for r in census_221(p, n) if r.nilpotency_class < p)

    if partition == (3,):
        if not verified:
            return len(type3_table(p, n))
        report = type3_check(p, n)
        if not report.passed:
            raise MismatchException("; ".join(report.failures))
        return sum(1 for r in census_type3(p, n) if r.nilpotency_class < p)

    raise UnsupportedPartitionException(
        f"Partition {_partition_name(partition)} is not a partition of 3"
    )


def psi_formula(p: int, n: int) -> int:
    check_range(p, n)
    tail = {7: 59, 8: 61}.get(n, 62)
    return 5 * p + 2 * math.gcd(p - 1, 3) + math.gcd(p - 1, 4) + tail


def psi_assembled(p: int, n: int, verified: bool = False) -> int:
    return sum(
        psi_part(p, n, partition, verified=verified)
        for partition in ((1, 1, 1), (2, 1), (3,))
    )


def stability_check(p: int, partition: Partition, m1: int, m2: int) -> CheckReport:
    """Class and derived order of the census rings at extension exponents m1, m2

    For (3) the rings live on ℤ/p^m ⊕ ℤ/p³ and their fingerprints, with
    the n-dependent parts shifted, are compared as multisets.
    """

    if partition == (2, 1):
        return _stability_221(p, m1, m2)
    if partition == (3,):
        return _stability_type3(p, m1, m2)

    raise UnsupportedPartitionException(
        f"No stability data for partition {_partition_name(partition)}"
    )


def _stability_221(p, m1, m2):
    if min(m1, m2) < 4:
        raise SpecViolationException(f"m = {min(m1, m2)} must be at least 2λ₁ = 4")

    failures = []
    reps = representatives_221(p)
    for ring, sigma in reps:
        z = census_z(ring)
        first = fingerprint(u_construction(UConstructionSpec(ring, m1, sigma, z)))
        second = fingerprint(u_construction(UConstructionSpec(ring, m2, sigma, z)))
        if _shape(first) != _shape(second):
            failures.append(
                f"{ring} {sigma}: class/derived order {_shape(first)} at m={m1},"
                f" {_shape(second)} at m={m2}"
            )

    return make_report(f"(2,1) stability m={m1} vs m={m2}", failures, len(reps))


def _stability_type3(p, m1, m2):
    if min(m1, m2) < 6:
        raise SpecViolationException(f"m = {min(m1, m2)} must be at least 2λ₁ = 6")

    first = collections.Counter(
        _type3_shape(p, r.fingerprint) for r in census_type3(p, m1 + 3)
    )
    second = collections.Counter(
        _type3_shape(p, r.fingerprint) for r in census_type3(p, m2 + 3)
    )

    failures = []
    if first != second:
        failures.append(
            f"type (3) fingerprints differ: {sorted(first.items())}"
            f" vs {sorted(second.items())}"
        )

    return make_report(
        f"(3) stability n={m1 + 3} vs n={m2 + 3}", failures, sum(first.values())
    )


def _shape(fp):
    return fp.nilpotency_class, fp.derived_order


def _type3_shape(p, fp):
    """Fingerprint with the parts that grow with n counted down from n

    Derived-℧ depths past the v exponent come from u alone, as does the
    factor p^n of the center order.
    """

    depth = fp.derived_agemo_depth
    if depth >= V_EXPONENT:
        depth -= fp.n
    center_shift = multiplicity(p, fp.center_order) - fp.n
    return fp.nilpotency_class, fp.derived_order, depth, center_shift


def _partition_name(partition):
    return ",".join(map(str, partition))


def _listed_matrices(p: int) -> Dict[str, List[GradedMatrix]]:
    nu = least_nonresidue(p)
    h = primitive_root(p)
    atype = AbelianType(p, (2, 2, 1))

    def mat(u1_row=(0, 0, 0), u2_row=(0, 0, 0)):  # noqa: WPS430
        return make_matrix(atype, [(0, 0, 0), u1_row, u2_row])

    half = range(1, (p - 1) // 2 + 1)

    v_list = [mat(u1_row=(p, 0, 0))]
    v_list += [mat(u2_row=(p * e, 0, 0)) for e in range(p)]
    v_list += [mat(u1_row=(0, 0, 1), u2_row=(p * e, 0, 0)) for e in range(p)]

    w_list = [
        mat(),
        mat(u1_row=(0, p, 0)),
        mat(u2_row=(0, p, 0)),
        mat(u2_row=(0, p * nu, 0)),
        mat(u1_row=(0, 0, 1)),
        mat(u1_row=(0, 0, nu)),
    ]
    w_list += [
        mat(u1_row=(0, 0, a3), u2_row=(0, p * b2, 0))
        for b2 in (1, nu)
        for a3 in (1, nu)
    ]
    w_list += [
        mat(u1_row=(1, 0, 0)),
        mat(u1_row=(1, p, 0)),
        mat(u1_row=(1, 0, 0), u2_row=(0, p, 0)),
        mat(u1_row=(1, 0, 0), u2_row=(0, p * nu, 0)),
    ]
    w_list += [mat(u1_row=(h**r, 0, a3)) for r in half for a3 in (1, h)]
    w_list += [
        mat(u1_row=(h**r, 0, a3), u2_row=(0, p * b2, 0))
        for r in half
        for b2 in (1, h)
        for a3 in (1, h)
    ]

    x_list = [
        mat(),
        mat(u1_row=(p, 0, 0)),
        mat(u2_row=(p, 0, 0)),
        mat(u1_row=(0, p, 0)),
        mat(u1_row=(0, p, 0), u2_row=(p, 0, 0)),
        mat(u2_row=(0, p, 0)),
        mat(u1_row=(0, p, 0), u2_row=(p, p, 0)),
        mat(u1_row=(0, 0, 1)),
        mat(u1_row=(0, 0, 1), u2_row=(p, 0, 0)),
        mat(u1_row=(0, 0, 1), u2_row=(0, p, 0)),
        mat(u1_row=(0, 0, 1), u2_row=(0, p * nu, 0)),
        mat(u1_row=(1, 0, 0)),
        mat(u1_row=(1, p, 0)),
        mat(u1_row=(1, 0, 0), u2_row=(0, p, 0)),
        mat(u1_row=(1, 0, 1)),
        mat(u1_row=(1, 0, 1), u2_row=(p, 0, 0)),
        mat(u1_row=(1, 0, 1), u2_row=(0, p, 0)),
        mat(u1_row=(1, 0, 1), u2_row=(0, p * nu, 0)),
    ]

    return {"V": v_list, "W": w_list, "X": x_list}
