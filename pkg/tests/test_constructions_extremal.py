import pytest

from coexlab.constructions_extremal import (
    ParameterViolationException,
    extremal_group,
    lower_central_series_check,
    power_lemma_check,
)
from coexlab.group_invariants import (
    class_bound_check,
    group_invariants,
    identity_inverse_check,
)


@pytest.fixture(scope="module")
def stages():
    return extremal_group(5, 2, 4)


def test_orders(stages):
    stage_one, stage_two = stages

    assert stage_one.order == 5**5
    assert stage_two.order == 5**4
    assert sum(1 for _ in stage_two.elements()) == 5**4


def test_generator_action(stages):
    stage_one, _ = stages
    g = stage_one.g()
    x1 = stage_one.x(1)

    conj = stage_one.conjugate(x1, g)

    assert conj == (1, 1, 0, 0)


def test_identity_and_inverse(stages):
    stage_one, stage_two = stages

    assert identity_inverse_check(stage_one).passed
    assert identity_inverse_check(stage_two).passed


def test_stage_two_invariants(stages):
    _, stage_two = stages

    invariants = group_invariants(stage_two)

    assert invariants.nilpotency_class == 3
    assert invariants.coexponent == 2
    assert class_bound_check(stage_two, invariants).passed


def test_power_lemma(stages):
    stage_one, _ = stages

    report = power_lemma_check(stage_one)

    assert report.passed
    assert report.checked == 5**3 * 5**2


def test_lower_central_series(stages):
    stage_one, _ = stages

    assert lower_central_series_check(stage_one).passed


@pytest.mark.parametrize(
    "p, f, n",
    [
        (4, 2, 4),
        (3, 3, 5),
        (5, 3, 4),
    ],
)
def test_parameter_violations(p, f, n):
    with pytest.raises(ParameterViolationException):
        extremal_group(p, f, n)
