import pytest

from coexlab.census import census_z, representatives_221
from coexlab.constructions import UConstructionSpec, u_construction
from coexlab.equivalence_engine import (
    EquivalenceWitness,
    NotOnLineException,
    act,
    central_transitivity_check,
    check_witness,
    compose_witnesses,
    equivalent_direct,
    inner_derivation_table,
    inner_moves,
    invert_witness,
    line_scalar,
    move_set,
    orbit_partition,
)
from coexlab.graded_maps import (
    add_matrices,
    compose,
    diagonal_matrix,
    elementary_matrix,
    identity_matrix,
    inner_derivation,
    inverse,
    make_matrix,
    scale_matrix,
    zero_matrix,
)
from coexlab.liering_core import TooLargeException


@pytest.fixture()
def tau(ring_v):
    return make_matrix(ring_v.atype, [(0, 0, 0), (0, 0, 0), (5, 0, 0)])


@pytest.fixture()
def planted(ring_v, tau):
    pi = compose(
        diagonal_matrix(ring_v.atype, (2, 1, 1)),
        elementary_matrix(ring_v.atype, 2, 0, 5),
    )
    witness = EquivalenceWitness(pi=pi, alpha=2, x=(0, 1, 3))
    target = add_matrices(
        inner_derivation(ring_v, witness.x), scale_matrix(witness.alpha, tau)
    )
    sigma = compose(compose(pi, target), inverse(pi))
    return sigma, witness


def test_line_scalar(ring_v, z):
    assert line_scalar(diagonal_matrix(ring_v.atype, (7, 1, 1)), z) == 7


def test_line_scalar_off_line(ring_x, z):
    with pytest.raises(NotOnLineException):
        line_scalar(elementary_matrix(ring_x.atype, 0, 1, 1), z)


def test_planted_witness(ring_v, z, tau, planted):
    sigma, witness = planted

    assert check_witness(ring_v, z, sigma, tau, witness)


def test_witness_rejects_wrong_alpha(ring_v, z, tau, planted):
    sigma, witness = planted
    wrong = EquivalenceWitness(pi=witness.pi, alpha=3, x=witness.x)

    assert not check_witness(ring_v, z, sigma, tau, wrong)


def test_invert_witness(ring_v, z, tau, planted):
    sigma, witness = planted

    assert check_witness(ring_v, z, tau, sigma, invert_witness(ring_v, witness))


def test_compose_witnesses(ring_v, z, tau, planted):
    sigma, witness = planted
    back = invert_witness(ring_v, witness)

    composed = compose_witnesses(ring_v, witness, back)

    assert check_witness(ring_v, z, sigma, sigma, composed)


def test_direct_identical(ring_v, z, tau):
    same, witness = equivalent_direct(ring_v, z, tau, tau)

    assert same
    assert witness.pi == identity_matrix(ring_v.atype)
    assert witness.alpha == 1


def test_direct_finds_planted(ring_v, z, tau, planted):
    sigma, _ = planted

    same, witness = equivalent_direct(ring_v, z, sigma, tau)

    assert same
    assert check_witness(ring_v, z, sigma, tau, witness)


def test_direct_rejects_distinct_representatives(ring_v, z):
    listed = [m for r, m in representatives_221(5) if r.name == "V"]

    same, witness = equivalent_direct(ring_v, z, listed[0], listed[1])

    assert not same
    assert witness is None


def test_act_identity(ring_v, z, tau):
    move = (identity_matrix(ring_v.atype), identity_matrix(ring_v.atype), 1)

    assert act(move, tau) == tau


def test_move_set_fixes_line(ring_w, z):
    for pi, pi_inv, alpha in move_set(ring_w, z):
        assert compose(pi, pi_inv) == identity_matrix(ring_w.atype)
        assert line_scalar(pi, z) == alpha


def test_inner_moves(ring_v, ring_x):
    assert inner_moves(ring_x) == []
    assert len(inner_moves(ring_v)) == 2


def test_inner_derivation_table(ring_v):
    table = inner_derivation_table(ring_v)

    assert zero_matrix(ring_v.atype).flat in table
    for flat, x in table.items():
        assert inner_derivation(ring_v, x).flat == flat


def test_orbit_partition_v(ring_v, z):
    listed = [m for r, m in representatives_221(5) if r.name == "V"]

    partition = orbit_partition(ring_v, z, listed)

    assert partition.count == 11
    assert sum(partition.sizes) == len(partition.states)
    assert sorted(partition.labels) == list(range(11))


def test_orbit_partition_unlisted(ring_v, z):
    stray = identity_matrix(ring_v.atype)

    partition = orbit_partition(ring_v, z, [stray])

    assert partition.labels == (None,)


@pytest.mark.parametrize("fixture", ["ring_v", "ring_w", "ring_x"])
def test_central_transitivity(fixture, request):
    assert central_transitivity_check(request.getfixturevalue(fixture))


def test_central_transitivity_cap(ring_v):
    built = u_construction(
        UConstructionSpec(ring_v, 4, zero_matrix(ring_v.atype), census_z(ring_v))
    )

    with pytest.raises(TooLargeException):
        central_transitivity_check(built)


@pytest.mark.slow
@pytest.mark.parametrize("fixture, expected", [("ring_w", 26), ("ring_x", 18)])
def test_orbit_partition_counts(fixture, expected, z, request):
    ring = request.getfixturevalue(fixture)
    listed = [m for r, m in representatives_221(5) if r.name == ring.name]

    partition = orbit_partition(ring, z, listed)

    assert partition.count == expected
    assert sorted(partition.labels) == list(range(expected))
