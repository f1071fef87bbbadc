import pytest

from coexlab.constructions import filiform_ring
from coexlab.group_invariants import (
    agemo_subgroup,
    associativity_check,
    class_bound_check,
    commutator_subgroup,
    duality_check,
    group_invariants,
    identity_inverse_check,
    inclusion_check,
    log_element_order,
    log_exponent,
    lower_central_series,
    nilpotency_class,
    omega_subgroup,
    regularity_check,
    subgroup_generated,
    whole_group,
)
from coexlab.group_types import Group
from coexlab.lazard_bridge import group_from_liering
from coexlab.liering_core import TooLargeException, abelian_ring
from coexlab.residue_types import AbelianType


class SkewGroup(Group):
    """ℤ/5 under a·b = a + 2b, which is not associative"""

    def __init__(self):
        super().__init__(5)

    def one(self):
        return 0

    def mult(self, a, b):
        return (a + 2 * b) % 5

    def inverse(self, a):
        return -a % 5

    def elements(self):
        return range(5)

    def generators(self):
        return [1]


@pytest.fixture(scope="module")
def abelian_21():
    return group_from_liering(abelian_ring(AbelianType(5, (2, 1))))


@pytest.fixture(scope="module")
def group_v(ring_v):
    return group_from_liering(ring_v)


def test_subgroup_generated(abelian_21):
    sub = subgroup_generated(abelian_21, [(1, 0), (5, 0), (0, 1)])

    assert sub.order == 125
    assert sub.gens == ((1, 0), (0, 1))
    assert (7, 3) in sub


def test_element_orders(abelian_21):
    assert log_element_order(abelian_21, (0, 0)) == 0
    assert log_element_order(abelian_21, (5, 1)) == 1
    assert log_element_order(abelian_21, (3, 0)) == 2
    assert log_exponent(abelian_21) == 2


def test_omega_agemo(abelian_21):
    assert omega_subgroup(abelian_21, 1).order == 25
    assert agemo_subgroup(abelian_21, 1).order == 5
    assert agemo_subgroup(abelian_21, 2).order == 1


def test_abelian_invariants(abelian_21):
    invariants = group_invariants(abelian_21)

    assert invariants.order == 125
    assert invariants.exponent == 25
    assert invariants.nilpotency_class == 1
    assert invariants.mu == (2, 1)
    assert invariants.omega == (2, 1)
    assert invariants.coexponent == 1


def test_lower_central_series(group_v):
    series = lower_central_series(group_v)

    assert [term.order for term in series] == [5**5, 5, 1]
    assert nilpotency_class(group_v) == 2


def test_commutator_subgroup(group_v):
    derived = commutator_subgroup(group_v, whole_group(group_v))

    assert derived.members == {(0, 5 * k, 0) for k in range(5)}


def test_ring_v_group_checks(group_v):
    invariants = group_invariants(group_v)

    assert invariants.exponent == 25
    assert invariants.coexponent == 3
    assert duality_check(group_v, invariants).passed
    assert inclusion_check(group_v, invariants).passed
    assert class_bound_check(group_v, invariants).passed


def test_regularity_sampled(group_v):
    report = regularity_check(group_v, pairs=50)

    assert report.passed
    assert report.checked == 50


def test_regularity_exhaustive(abelian_21):
    report = regularity_check(abelian_21, pairs=50)

    assert report.passed
    assert report.checked == 125**2


def test_associativity_exhaustive(abelian_21):
    report = associativity_check(abelian_21)

    assert report.passed
    assert report.checked == 125**3


def test_associativity_sampled(group_v):
    report = associativity_check(group_v, samples=500)

    assert report.passed
    assert report.checked == 500


def test_associativity_failure():
    report = associativity_check(SkewGroup())

    assert not report.passed
    assert report.failures


def test_identity_inverse(group_v):
    assert identity_inverse_check(group_v).passed


def test_invariants_cap():
    group = group_from_liering(abelian_ring(AbelianType(5, (4, 4))))

    with pytest.raises(TooLargeException):
        group_invariants(group)


def test_associativity_generators(mocker, abelian_21):
    mocker.patch("coexlab.group_invariants.EXHAUSTIVE_TRIPLES", 125**2 * 2)

    report = associativity_check(abelian_21)

    assert report.passed
    assert report.checked == 125**2 * 2


def test_associativity_generators_failure(mocker):
    mocker.patch("coexlab.group_invariants.EXHAUSTIVE_TRIPLES", 25)

    report = associativity_check(SkewGroup())

    assert not report.passed
    assert report.checked == 25


@pytest.mark.slow
def test_associativity_exhaustive_order_p4():
    group = group_from_liering(filiform_ring(5, 4))

    report = associativity_check(group)

    assert report.passed
    assert report.checked == 625**2 * 4
