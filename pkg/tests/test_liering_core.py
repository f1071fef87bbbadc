import random

import pytest

from coexlab.constructions import UConstructionSpec, ring_221, u_construction
from coexlab.graded_maps import zero_matrix
from coexlab.liering_core import (
    JacobiFailException,
    NotAnIdealException,
    NotNilpotentException,
    OrderIncompatException,
    TooLargeException,
    abelian_ring,
    apply_rows,
    center,
    central_power_quotient,
    derived_subring,
    fingerprint,
    isomorphic_small,
    lower_central_series,
    make_liering,
    nilpotency_class,
    omega_subring,
    quotient,
    quotient_projection,
    validate,
)
from coexlab.residue_core import subgroup_closure, subgroup_contains
from coexlab.residue_types import AbelianType


def test_bracket_generators(ring_v):
    assert ring_v.bracket((0, 1, 0), (0, 0, 1)) == (0, 5, 0)
    assert ring_v.bracket((0, 0, 1), (0, 1, 0)) == (0, 20, 0)


def test_bracket_bilinear(ring_v):
    assert ring_v.bracket((0, 1, 0), (0, 0, 2)) == (0, 10, 0)


def test_bracket_self_vanishes(ring_v):
    assert ring_v.bracket((3, 7, 2), (3, 7, 2)) == (0, 0, 0)


def test_bracket_antisymmetric_sampled(ring_w):
    rng = random.Random(1729)
    atype = ring_w.atype

    for _ in range(200):
        x = tuple(rng.randrange(m) for m in atype.moduli)
        y = tuple(rng.randrange(m) for m in atype.moduli)

        assert ring_w.bracket(x, y) == atype.neg(ring_w.bracket(y, x))


def test_jacobi_sampled(ring_v):
    rng = random.Random(1729)
    atype = ring_v.atype
    br = ring_v.bracket

    for _ in range(100):
        x, y, w = (
            tuple(rng.randrange(m) for m in atype.moduli) for _ in range(3)
        )
        total = atype.add(
            br(br(x, y), w), atype.add(br(br(y, w), x), br(br(w, x), y))
        )

        assert total == atype.zero()


def test_validate_transversal(ring_v, ring_w, ring_x):
    assert validate(ring_v)
    assert validate(ring_w)
    assert validate(ring_x)


def test_validate_order_incompat():
    atype = AbelianType(5, (2, 1))

    with pytest.raises(OrderIncompatException) as excinfo:
        make_liering(atype, {(0, 1): (1, 0)})

    assert excinfo.value.pair == (0, 1)


def test_validate_jacobi_fail():
    atype = AbelianType(5, (1, 1, 1))

    with pytest.raises(JacobiFailException) as excinfo:
        make_liering(atype, {(0, 1): (1, 0, 0), (1, 2): (0, 1, 0)})

    assert excinfo.value.triple == (0, 1, 2)


def test_non_nilpotent_ring():
    atype = AbelianType(5, (1, 1, 1))
    ring = make_liering(atype, {(0, 1): (0, 0, 1), (0, 2): (0, 1, 0)})

    with pytest.raises(NotNilpotentException):
        nilpotency_class(ring)

    with pytest.raises(NotNilpotentException):
        fingerprint(ring)


def test_make_liering_negates_reversed_pairs():
    atype = AbelianType(5, (1, 1))
    ring = make_liering(atype, {(1, 0): (0, 0)})

    assert ring.is_abelian


def test_lower_central_series_v(ring_v):
    series = lower_central_series(ring_v)

    assert [term.order for term in series] == [5**5, 5, 1]


def test_center(ring_v, ring_w, ring_x):
    assert center(ring_v).order == 125
    assert center(ring_w).order == 125
    assert center(ring_x).order == 5**5
    assert subgroup_contains(center(ring_v), (1, 5, 0))
    assert not subgroup_contains(center(ring_v), (0, 1, 0))


def test_fingerprint_x(ring_x):
    fp = fingerprint(ring_x)

    assert fp.nilpotency_class == 1
    assert fp.derived_order == 1
    assert fp.derived_agemo_depth == 2


def test_fingerprint_v(ring_v):
    fp = fingerprint(ring_v)

    assert fp.n == 5
    assert fp.nilpotency_class == 2
    assert fp.derived_order == 5
    assert fp.center_order == 125
    assert fp.derived_agemo_depth == 1
    assert fp.derived_center_power_order == 1


def test_fingerprint_w(ring_w):
    fp = fingerprint(ring_w)

    assert fp.nilpotency_class == 2
    assert fp.derived_order == 5
    assert fp.derived_agemo_depth == 1
    assert fp.derived_center_power_order == 5


def test_quotient_by_derived(ring_v):
    result = quotient(ring_v, derived_subring(ring_v))

    assert result.atype.exponents == (2, 1, 1)
    assert result.is_abelian
    assert validate(result)


def test_quotient_zero_ideal(ring_w):
    assert quotient(ring_w, subgroup_closure([], ring_w.atype)) == ring_w


def test_quotient_by_central_generator(ring_x):
    result, images = quotient_projection(
        ring_x, subgroup_closure([(1, 0, 0)], ring_x.atype)
    )

    assert result.atype.exponents == (2, 1)
    assert result.is_abelian
    assert images == [(0, 0), (1, 0), (0, 1)]


def test_quotient_eliminates_unit_relation():
    atype = AbelianType(5, (3, 2, 2, 1))
    ring = ring_221(5, 0, 1)
    extended = make_liering(
        atype,
        {(2, 3): (0, 0, 5, 0)},
    )
    ideal = subgroup_closure([(5, 24, 0, 0)], atype)

    result = quotient(extended, ideal)

    assert result.atype.exponents == (3, 2, 1)
    assert result.order * ideal.order == extended.order
    assert isomorphic_small(omega_subring(result, 2), ring)[0]


def test_quotient_not_an_ideal(ring_v):
    with pytest.raises(NotAnIdealException):
        quotient(ring_v, subgroup_closure([(0, 0, 1)], ring_v.atype))


def test_omega_subring(ring_v):
    result = omega_subring(ring_v, 1)

    assert result.atype.exponents == (1, 1, 1)
    assert result.is_abelian


def test_omega_subring_full(ring_w):
    assert omega_subring(ring_w, 2) == ring_w


def test_central_power_quotient():
    ring = abelian_ring(AbelianType(5, (4, 2, 1)))

    result = central_power_quotient(ring)

    assert result.atype.exponents == (2, 2, 1)


def test_central_power_quotient_unchanged(ring_v):
    assert central_power_quotient(ring_v) == ring_v


def test_isomorphic_small_alpha_one_one(ring_v):
    other = ring_221(5, 1, 1)

    found, rows = isomorphic_small(ring_v, other)

    assert found
    for a in range(3):
        for b in range(3):
            assert other.bracket(rows[a], rows[b]) == apply_rows(
                rows, ring_v.brackets[a][b], ring_v.atype
            )


def test_isomorphic_small_v_w(ring_v, ring_w):
    assert isomorphic_small(ring_v, ring_w) == (False, None)


def test_isomorphic_small_self(ring_w):
    assert isomorphic_small(ring_w, ring_w) == (
        True,
        ((1, 0, 0), (0, 1, 0), (0, 0, 1)),
    )


def test_isomorphic_small_different_types(ring_x):
    assert not isomorphic_small(ring_x, abelian_ring(AbelianType(5, (3, 1, 1))))[0]


def test_isomorphic_small_too_large():
    ring = abelian_ring(AbelianType(5, (3, 2, 1)))

    with pytest.raises(TooLargeException):
        isomorphic_small(ring, ring)


def test_central_power_quotient_of_extension(ring_w):
    extended = u_construction(
        UConstructionSpec(ring_w, 4, zero_matrix(ring_w.atype), (1, 0, 0))
    )

    result = central_power_quotient(extended)

    assert extended.atype.exponents == (4, 2, 1)
    assert result.order == 5**5
    assert fingerprint(result).invariants.coexponent == 3
