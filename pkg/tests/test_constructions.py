import pytest

from coexlab.constructions import (
    NotADerivationException,
    OrderObstructionException,
    SpecViolationException,
    UConstructionSpec,
    check_u_spec,
    extension_slot,
    filiform_ring,
    ring_221,
    semidirect_cyclic,
    u_construction,
)
from coexlab.graded_maps import identity_matrix, inner_derivation, zero_matrix
from coexlab.liering_core import (
    fingerprint,
    isomorphic_small,
    nilpotency_class,
    omega_subring,
)
from coexlab.residue_types import AbelianType


def test_ring_221_brackets():
    ring = ring_221(5, 1, 1)

    assert ring.bracket((0, 1, 0), (0, 0, 1)) == (5, 5, 0)


@pytest.mark.parametrize(
    "fixture, expected_class",
    [("ring_v", 2), ("ring_w", 2), ("ring_x", 1)],
)
def test_transversal_classes(fixture, expected_class, request):
    assert nilpotency_class(request.getfixturevalue(fixture)) == expected_class


@pytest.mark.parametrize("m, expected", [(1, 3), (2, 2), (3, 0), (4, 0)])
def test_extension_slot(m, expected):
    assert extension_slot(AbelianType(5, (2, 2, 1)), m) == expected


def test_semidirect_zero_action(ring_v):
    extended = semidirect_cyclic(ring_v, 4, zero_matrix(ring_v.atype))

    assert extended.atype.exponents == (4, 2, 2, 1)
    assert extended.order == 5**9


def test_semidirect_inner_action(ring_v):
    sigma = inner_derivation(ring_v, (0, 0, 1))

    extended = semidirect_cyclic(ring_v, 4, sigma)

    # u1 sits at index 2 once w takes slot 0
    assert extended.bracket((0, 0, 1, 0), (1, 0, 0, 0)) == (0, 0, 5, 0)


def test_semidirect_not_derivation(ring_v):
    with pytest.raises(NotADerivationException):
        semidirect_cyclic(ring_v, 4, identity_matrix(ring_v.atype))


def test_semidirect_order_obstruction(ring_x):
    with pytest.raises(OrderObstructionException):
        semidirect_cyclic(ring_x, 1, identity_matrix(ring_x.atype))


def test_u_construction_zero_action(ring_v, z):
    built = u_construction(UConstructionSpec(ring_v, 4, zero_matrix(ring_v.atype), z))
    fp = fingerprint(built)

    assert built.order == 5**7
    assert fp.invariants.coexponent == 3
    assert fp.nilpotency_class == 2


def test_u_construction_omega(ring_w, z):
    sigma = inner_derivation(ring_w, (0, 1, 0))

    built = u_construction(UConstructionSpec(ring_w, 4, sigma, z))
    same, _ = isomorphic_small(omega_subring(built, 2), ring_w)

    assert built.order == 5**7
    assert same


@pytest.mark.parametrize(
    "z_value, m",
    [
        ((0, 1, 0), 4),
        ((5, 0, 0), 4),
        ((1, 0, 0), 3),
    ],
)
def test_u_spec_violations(ring_v, z_value, m):
    spec = UConstructionSpec(ring_v, m, zero_matrix(ring_v.atype), z_value)

    with pytest.raises(SpecViolationException):
        check_u_spec(spec)


def test_u_spec_sigma_moves_z(ring_x, z):
    spec = UConstructionSpec(ring_x, 4, identity_matrix(ring_x.atype), z)

    with pytest.raises(SpecViolationException):
        check_u_spec(spec)


@pytest.mark.parametrize("rank", [3, 4, 5])
def test_filiform_ring(rank):
    ring = filiform_ring(5, rank)

    assert ring.order == 5**rank
    assert nilpotency_class(ring) == rank - 1
    assert str(ring) == f"F{rank}"
