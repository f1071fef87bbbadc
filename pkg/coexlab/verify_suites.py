import itertools
import logging
import os
import random
from dataclasses import dataclass, replace
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from sympy import Rational

from coexlab.census import (
    MismatchException,
    census_221,
    census_z,
    expected_orbit_counts,
    psi_assembled,
    psi_formula,
    representatives_221,
    stability_check,
    transversal_221,
    verify_221,
)
from coexlab.census_type3 import census_type3, type3_check, type3_table
from coexlab.constructions import (
    UConstructionSpec,
    filiform_ring,
    ring_221,
    u_construction,
)
from coexlab.constructions_extremal import (
    extremal_group,
    lower_central_series_check,
    power_lemma_check,
)
from coexlab.equivalence_engine import (
    EquivalenceWitness,
    central_transitivity_check,
    check_witness,
    compose_witnesses,
    enlarged_orbit_count,
    equivalent_direct,
    invert_witness,
    line_scalar,
)
from coexlab.graded_maps import (
    add_matrices,
    compose,
    generated_group_order,
    inner_derivation,
    inverse,
    lie_automorphism_generators,
    random_lie_automorphism,
    scale_matrix,
    zero_matrix,
)
from coexlab.graded_maps_enum import enumerate_lie_auts_fixing_line
from coexlab.group_invariants import (
    DEFAULT_SEED,
    associativity_check,
    class_bound_check,
    duality_check,
    group_invariants,
    identity_inverse_check,
    inclusion_check,
    log_exponent,
    nilpotency_class as group_class,
    regularity_check,
)
from coexlab.group_types import CheckReport, make_report
from coexlab.lazard_bch import X, Y, bch_table, formal_associativity, with_coefficient
from coexlab.lazard_bridge import (
    LazardGroup,
    ReconstructionDivergenceException,
    bracket_from_group,
    group_from_liering,
)
from coexlab.liering_core import (
    JacobiFailException,
    central_power_quotient,
    fingerprint,
    isomorphic_small,
    make_liering,
    omega_subring,
    quotient,
    validate,
)
from coexlab.residue_core import (
    dual_partition,
    least_nonresidue,
    primitive_root,
    quadratic_character,
    subgroup_closure,
    type_invariants,
    unit_inverse,
)
from coexlab.residue_types import AbelianType, PrimePower

logger = logging.getLogger(__name__)

SEED_VARIABLE = "COEXLAB_SEED"

FAULTS = ("reps", "type3", "bch")

EXTREMAL_CASES = ((5, 2, 4), (5, 3, 5), (7, 3, 5))
POWER_LEMMA_CASE = (5, 3, 5)
FORMULA_DEGREES = (7, 8, 9, 12)
SPOT_VALUES = {(5, 7): 90, (5, 9): 93, (7, 8): 104}
RANDOM_AUTOMORPHISMS = 100
POSITIVE_PAIRS = 3
REGULAR_RINGS = 5


class SeedException(Exception):
    """Exception for when COEXLAB_SEED is not an integer"""


@dataclass(frozen=True)
class VerifyOptions(object):
    samples: int = 1_000_000
    pairs: int = 2000
    direct_pairs: int = 40
    inject_fault: Optional[str] = None
    seed: int = DEFAULT_SEED
    progress: bool = False

    def rng(self, salt: str) -> random.Random:
        return random.Random(f"{self.seed}:{salt}")


@dataclass(frozen=True)
class SuiteResult(object):
    name: str
    p: int
    reports: Tuple[CheckReport, ...] = ()
    skipped: bool = False

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.reports)


def get_seed() -> int:
    raw = os.environ.get(SEED_VARIABLE)
    if raw is None:
        return DEFAULT_SEED

    try:
        return int(raw)
    except ValueError as e:
        raise SeedException(f"{SEED_VARIABLE}={raw!r} is not an integer") from e


def run_suites(
    primes: Iterable[int], skip: Sequence[str], options: VerifyOptions
) -> List[SuiteResult]:
    results = []
    for p in primes:
        for name, suite in SUITES.items():
            if name in skip:
                logger.info(f"Skipping suite '{name}' at p={p}")
                results.append(SuiteResult(name=name, p=p, skipped=True))
                continue

            logger.info(f"Running suite '{name}' at p={p}...")
            reports = tuple(suite(p, options))
            for report in reports:
                logger.debug(str(report))
            results.append(SuiteResult(name=name, p=p, reports=reports))

    return results


def suite_residue(p: int, options: VerifyOptions) -> List[CheckReport]:
    failures = []

    modulus = PrimePower(p, 3)
    units = [a for a in range(modulus.modulus) if a % p]
    for a in units:
        if a * unit_inverse(a, modulus) % modulus.modulus != 1:
            failures.append(f"inverse of {a} modulo {modulus.modulus}")

    nu = least_nonresidue(p)
    if quadratic_character(nu, p) != -1:
        failures.append(f"ν = {nu} is a square modulo {p}")
    if any(quadratic_character(a, p) != 1 for a in range(1, nu)):
        failures.append(f"a non-residue below ν = {nu}")

    h = primitive_root(p)
    powers = {pow(h, k, p) for k in range(p - 1)}
    if len(powers) != p - 1:
        failures.append(f"h = {h} has order {len(powers)} modulo {p}")

    for parts in ((2, 2, 1), (3, 2, 2, 1), (5, 1)):
        if dual_partition(dual_partition(parts)) != parts:
            failures.append(f"dual partition of {parts} is not an involution")

    inv = type_invariants(AbelianType(p, (2, 2, 1)))
    if inv.omega != (3, 2) or inv.coexponent != 3:
        failures.append(f"type (2,2,1) has ω = {inv.omega}, f = {inv.coexponent}")

    return [make_report(f"residue arithmetic p={p}", failures, len(units) + 6)]


def suite_liering(p: int, options: VerifyOptions) -> List[CheckReport]:
    failures = []

    try:
        rings = transversal_221(p)
    except MismatchException as e:
        return [make_report(f"transversal p={p}", [str(e)], 3)]

    prints = [fingerprint(ring) for ring in rings]
    for ring, fp in zip(rings, prints):
        if not validate(ring):
            failures.append(f"{ring} fails validation")
        if fp.invariants.coexponent != 3:
            failures.append(f"{ring} has coexponent {fp.invariants.coexponent}")
        failures.extend(_quotient_failures(_trivial_extension(ring)))

    if len(set(prints)) != len(prints):
        failures.append("transversal fingerprints collide")

    try:
        make_liering(
            AbelianType(p, (1, 1, 1)), {(0, 1): (1, 0, 0), (1, 2): (0, 1, 0)}
        )
    except JacobiFailException:
        pass
    else:
        failures.append("Jacobi failure was not detected")

    return [make_report(f"Lie rings p={p}", failures, len(rings) + 1)]


def suite_orbits(p: int, options: VerifyOptions) -> List[CheckReport]:
    """Move-set closure: transitivity, generation and enlargement stability"""

    rng = options.rng("orbits")
    rings = transversal_221(p)
    expected = expected_orbit_counts(p)

    transitivity = [
        f"{ring}: Aut(U) is not transitive on central elements of top order"
        for ring in rings
        if not central_transitivity_check(ring)
    ]

    generation = []
    v_ring = rings[0]
    z = census_z(v_ring)
    if p <= 5:
        enumerated = sum(
            1 for _ in enumerate_lie_auts_fixing_line(v_ring, z, options.progress)
        )
        generated = generated_group_order(lie_automorphism_generators(v_ring, z))
        if enumerated != generated:
            generation.append(
                f"{v_ring}: generators give {generated} of {enumerated} automorphisms"
            )

    enlargement = []
    for ring in rings:
        z = census_z(ring)
        extra = [
            random_lie_automorphism(ring, z, rng) for _ in range(RANDOM_AUTOMORPHISMS)
        ]
        count = enlarged_orbit_count(ring, z, extra)
        if count != expected[ring.name]:
            enlargement.append(
                f"{ring}: {count} classes with {len(extra)} extra automorphisms"
            )

    return [
        make_report(f"central transitivity p={p}", transitivity, len(rings)),
        make_report(f"move set generation p={p}", generation, 1 if p <= 5 else 0),
        make_report(f"enlarged move set p={p}", enlargement, len(rings)),
    ]


def suite_reps(p: int, options: VerifyOptions) -> List[CheckReport]:
    reps = representatives_221(p)
    if options.inject_fault == "reps":
        reps = _corrupt_reps(reps)

    return [verify_221(p, reps, progress=options.progress)]


def suite_equivalence(p: int, options: VerifyOptions) -> List[CheckReport]:
    rng = options.rng("equivalence")
    reps = representatives_221(p)
    by_ring = {}
    for ring, sigma in reps:
        by_ring.setdefault(ring.name, (ring, []))[1].append(sigma)

    negatives = []
    candidates = [
        (ring, first, second)
        for ring, listed in by_ring.values()
        for first, second in itertools.combinations(listed, 2)
    ]
    chosen = rng.sample(candidates, min(options.direct_pairs, len(candidates)))
    for ring, first, second in chosen:
        same, _ = equivalent_direct(ring, census_z(ring), first, second)
        if same:
            negatives.append(f"{ring}: {first} ~ {second}")

    positives = []
    checked = 0
    for ring, listed in by_ring.values():
        z = census_z(ring)
        for tau in rng.sample(listed, min(POSITIVE_PAIRS, len(listed))):
            checked += 1
            positives.extend(_positive_failures(ring, z, tau, rng))

    return [
        make_report(f"listed pairs inequivalent p={p}", negatives, len(chosen)),
        make_report(f"witness algebra p={p}", positives, checked),
    ]


def suite_construct(p: int, options: VerifyOptions) -> List[CheckReport]:
    """Cyclic extensions at m = 4 have order p⁷, coexponent 3 and Ω₂ ≅ U"""

    failures = []
    reps = representatives_221(p)
    for ring, sigma in reps:
        built = u_construction(UConstructionSpec(ring, 4, sigma, census_z(ring)))
        fp = fingerprint(built)
        where = f"{ring} {sigma}"
        if built.order != p**7:
            failures.append(f"{where}: order {built.order}")
        if fp.invariants.coexponent != 3:
            failures.append(f"{where}: coexponent {fp.invariants.coexponent}")
        if fp.nilpotency_class > 4:
            failures.append(f"{where}: class {fp.nilpotency_class}")
        same, _ = isomorphic_small(omega_subring(built, ring.atype.exponents[0]), ring)
        if not same:
            failures.append(f"{where}: Ω₂ is not isomorphic to {ring}")

    return [make_report(f"cyclic extensions p={p}", failures, len(reps))]


def suite_stability(p: int, options: VerifyOptions) -> List[CheckReport]:
    return [
        stability_check(p, (2, 1), 4, 6),
        stability_check(p, (3,), 6, 7),
    ]


def suite_type3(p: int, options: VerifyOptions) -> List[CheckReport]:
    reports = []
    for n in (7, 8, 9):
        table = type3_table(p, n)
        if options.inject_fault == "type3" and n == 7:
            table = table[:-1] + table[:1]
        reports.append(type3_check(p, n, table))
    return reports


def suite_formula(p: int, options: VerifyOptions) -> List[CheckReport]:
    failures = []
    for n in FORMULA_DEGREES:
        closed = psi_formula(p, n)
        assembled = psi_assembled(p, n)
        if closed != assembled:
            failures.append(f"n={n}: closed form {closed}, assembled {assembled}")
        spot = SPOT_VALUES.get((p, n))
        if spot is not None and closed != spot:
            failures.append(f"n={n}: closed form {closed}, expected {spot}")

    return [make_report(f"formula p={p}", failures, len(FORMULA_DEGREES))]


def suite_lazard(p: int, options: VerifyOptions) -> List[CheckReport]:
    rng = options.rng("lazard")
    degree_table = _bch_tables(options)

    formal = [
        f"degree {d}: BCH is not associative"
        for d, table in degree_table.items()
        if not formal_associativity(d, table)
    ]
    reports = [make_report("formal associativity", formal, len(degree_table))]

    records = census_221(p, 7, progress=options.progress) + census_type3(p, 7)
    deepest = max(records, key=lambda r: r.nilpotency_class)

    for ring in small_rings(p) + [deepest.ring]:
        group = _lazard_group(ring, degree_table)
        reports.append(identity_inverse_check(group))
        reports.append(
            _renamed(
                associativity_check(
                    group, options.samples, rng=rng, progress=options.progress
                ),
                f"{ring} associativity",
            )
        )

    mismatches = []
    roundtrip = []
    for record in records:
        group = _lazard_group(record.ring, degree_table)
        mismatches.extend(census_group_failures(record, group))
        try:
            recovered = bracket_from_group(group, rng=rng)
        except ReconstructionDivergenceException as e:
            roundtrip.append(f"{record.ring}: {e}")
            continue
        if recovered.nonzero_pairs != record.ring.nonzero_pairs:
            roundtrip.append(f"{record.ring}: recovered brackets differ")

    reports.append(
        make_report(f"census group invariants p={p}", mismatches, len(records))
    )
    reports.append(make_report(f"bracket roundtrip p={p}", roundtrip, len(records)))

    for ring in transversal_221(p):
        reports.append(_invariants_report(ring, _lazard_group(ring, degree_table)))

    return reports


def suite_extremal(p: int, options: VerifyOptions) -> List[CheckReport]:
    reports = []
    for case in EXTREMAL_CASES:
        if case[0] != p:
            continue
        _, f, n = case
        stage_one, stage_two = extremal_group(p, f, n)
        invariants = group_invariants(stage_two, progress=options.progress)

        failures = []
        if invariants.nilpotency_class != f + 1:
            failures.append(f"class {invariants.nilpotency_class}, expected {f + 1}")
        if invariants.coexponent != f:
            failures.append(f"coexponent {invariants.coexponent}, expected {f}")
        reports.append(make_report(f"{stage_two} invariants", failures, 1))
        reports.append(class_bound_check(stage_two, invariants))

        if case == POWER_LEMMA_CASE:
            reports.append(power_lemma_check(stage_one))
        if p == 5:
            reports.append(lower_central_series_check(stage_one))

    return reports


def suite_regular(p: int, options: VerifyOptions) -> List[CheckReport]:
    rng = options.rng("regular")
    degree_table = _bch_tables(options)
    records = census_221(p, 7)
    step = max(len(records) // REGULAR_RINGS, 1)

    reports = []
    for record in records[::step][:REGULAR_RINGS]:
        group = _lazard_group(record.ring, degree_table)
        invariants = group_invariants(group, progress=options.progress)
        reports.append(_invariants_report(record.ring, group, invariants))
        reports.append(duality_check(group, invariants))
        reports.append(inclusion_check(group, invariants))
        reports.append(class_bound_check(group, invariants))
        reports.append(
            regularity_check(group, options.pairs, rng=rng, progress=options.progress)
        )

    return reports


SUITES: Dict[str, Callable[[int, VerifyOptions], List[CheckReport]]] = {
    "residue": suite_residue,
    "liering": suite_liering,
    "orbits": suite_orbits,
    "reps": suite_reps,
    "equivalence": suite_equivalence,
    "construct": suite_construct,
    "stability": suite_stability,
    "type3": suite_type3,
    "formula": suite_formula,
    "lazard": suite_lazard,
    "extremal": suite_extremal,
    "regular": suite_regular,
}


def _corrupt_reps(reps):
    """Replace the last V representative with a copy of the first"""

    v_indices = [i for i, (ring, _) in enumerate(reps) if ring.name == "V"]
    corrupted = list(reps)
    corrupted[v_indices[-1]] = reps[v_indices[0]]
    return corrupted


def _bch_tables(options):
    tables = {d: bch_table(d) for d in range(1, 6)}
    if options.inject_fault == "bch":
        tables = {
            d: with_coefficient(t, (X, Y), Rational(1, 3)) for d, t in tables.items()
        }
    return tables


def _lazard_group(ring, tables):
    group = group_from_liering(ring)
    return LazardGroup(ring, tables[group.table.degree])


def _invariants_report(ring, group, invariants=None):
    invariants = invariants or group_invariants(group)
    fp = fingerprint(ring)

    failures = []
    ring_exponent = _ring_exponent(ring, fp)
    if invariants.exponent != ring_exponent:
        failures.append(f"exponent {invariants.exponent}, ring {ring_exponent}")
    if invariants.coexponent != fp.invariants.coexponent:
        failures.append(
            f"coexponent {invariants.coexponent}, ring {fp.invariants.coexponent}"
        )
    if invariants.nilpotency_class != fp.nilpotency_class:
        failures.append(
            f"class {invariants.nilpotency_class}, ring {fp.nilpotency_class}"
        )

    return make_report(f"{ring} group invariants", failures, 3)


def _ring_exponent(ring, fp):
    return ring.p ** fp.invariants.exponent


def _positive_failures(ring, z, tau, rng):
    """Move τ by a random witness and check the search and witness algebra"""

    atype = ring.atype
    pi = random_lie_automorphism(ring, z, rng)
    alpha = line_scalar(pi, z)
    x = tuple(rng.randrange(m) for m in atype.moduli)
    target = add_matrices(inner_derivation(ring, x), scale_matrix(alpha, tau))
    sigma = compose(compose(pi, target), inverse(pi))

    planted = EquivalenceWitness(pi=pi, alpha=alpha, x=x)
    failures = []
    if not check_witness(ring, z, sigma, tau, planted):
        failures.append(f"{ring}: planted witness fails for {tau}")
        return failures

    back = invert_witness(ring, planted)
    if not check_witness(ring, z, tau, sigma, back):
        failures.append(f"{ring}: inverted witness fails for {tau}")
    round_trip = compose_witnesses(ring, planted, back)
    if not check_witness(ring, z, sigma, sigma, round_trip):
        failures.append(f"{ring}: composed witness fails for {tau}")

    found, witness = equivalent_direct(ring, z, sigma, tau)
    if not found:
        failures.append(f"{ring}: direct search misses a planted equivalence")
    elif not check_witness(ring, z, sigma, tau, witness):
        failures.append(f"{ring}: direct search returned a bad witness")

    return failures


def small_rings(p: int):
    """Rings of order p⁴ whose Lazard groups are checked exhaustively"""

    w_ring = ring_221(p, 1, 0, name="W")
    pu1 = subgroup_closure([(0, p, 0)], w_ring.atype)
    return [filiform_ring(p, 4), quotient(w_ring, pu1, name="W/⟨pu₁⟩")]


def census_group_failures(record, group):
    """Exponent, coexponent and class of the group against the census ring"""

    fp = record.fingerprint
    e = log_exponent(group)
    compared = {
        "exponent": (record.p**e, record.p**fp.invariants.exponent),
        "coexponent": (fp.n - e, fp.invariants.coexponent),
        "class": (group_class(group), fp.nilpotency_class),
    }
    return [
        f"{record.ring}: group {name} {found}, ring {expected}"
        for name, (found, expected) in compared.items()
        if found != expected
    ]


def _renamed(report, name):
    return replace(report, name=name)


def _trivial_extension(ring):
    """U(ring) at m = 4 with zero action, of type (4, 2, 1)"""

    zero = zero_matrix(ring.atype)
    return u_construction(UConstructionSpec(ring, 4, zero, census_z(ring)))


def _quotient_failures(ring):
    reduced = central_power_quotient(ring)
    before = fingerprint(ring).invariants.coexponent
    after = fingerprint(reduced).invariants.coexponent

    failures = []
    if reduced.order == ring.order:
        failures.append(f"{ring}: central power quotient is trivial")
    if after != before:
        failures.append(f"{ring}: central power quotient gives coexponent {after}")
    return failures
