import pytest

from coexlab.census import (
    UnsupportedPartitionException,
    _type3_shape,
    census,
    census_221,
    class_histogram,
    expected_orbit_counts,
    psi_assembled,
    psi_formula,
    psi_part,
    representatives_221,
    stability_check,
    transversal_221,
    verify_221,
)
from coexlab.census_type3 import OutOfRangeException, census_type3, type3_ring
from coexlab.constructions import SpecViolationException
from coexlab.liering_core import fingerprint


@pytest.fixture(scope="module")
def records_221():
    return census_221(5, 7)


def test_transversal_names():
    assert [ring.name for ring in transversal_221(5)] == ["V", "W", "X"]


def test_expected_orbit_counts():
    assert expected_orbit_counts(5) == {"V": 11, "W": 26, "X": 18}
    assert expected_orbit_counts(7) == {"V": 15, "W": 32, "X": 18}


@pytest.mark.parametrize("p, total", [(5, 55), (7, 65), (11, 85)])
def test_representative_count(p, total):
    assert len(representatives_221(p)) == total


def test_verify_221():
    report = verify_221(5)

    assert report.passed, report.failures
    assert report.checked == 55


def test_verify_221_duplicate():
    reps = representatives_221(5)
    reps[1] = reps[0]

    report = verify_221(5, reps)

    assert not report.passed
    assert any("share a class" in failure for failure in report.failures)


def test_census_221(records_221):
    assert len(records_221) == 55
    assert {r.partition for r in records_221} == {(2, 1)}
    assert all(r.ring.order == 5**7 for r in records_221)
    assert all(r.fingerprint.invariants.coexponent == 3 for r in records_221)
    assert all(r.nilpotency_class < 5 for r in records_221)


def test_census_221_sorted(records_221):
    keys = [r.sort_key() for r in records_221]

    assert keys == sorted(keys)


def test_census_221_provenance(records_221):
    bases = {r.provenance.base for r in records_221}

    assert bases == {"V", "W", "X"}
    assert all(r.provenance.m == 4 for r in records_221)


def test_census_unsupported():
    with pytest.raises(UnsupportedPartitionException):
        census(5, 7, [(1, 1, 1)])


def test_census_type3_only():
    records = census(5, 8, [(3,)])

    assert len(records) == 8


def test_class_histogram():
    histogram = class_histogram(census_type3(5, 7))

    assert sum(histogram.values()) == 6
    assert list(histogram) == sorted(histogram)


@pytest.mark.parametrize(
    "p, n, expected",
    [
        (5, 7, 90),
        (5, 9, 93),
        (7, 8, 104),
        (5, 12, 93),
    ],
)
def test_psi_formula(p, n, expected):
    assert psi_formula(p, n) == expected


@pytest.mark.parametrize("p", [5, 7, 11, 13])
@pytest.mark.parametrize("n", [7, 8, 9, 12])
def test_psi_assembled(p, n):
    assert psi_assembled(p, n) == psi_formula(p, n)


@pytest.mark.parametrize(
    "p, expected",
    [(5, 29), (7, 31), (13, 33)],
)
def test_psi_part_cited(p, expected):
    assert psi_part(p, 7, (1, 1, 1)) == expected


def test_psi_part_verified_type3():
    assert psi_part(5, 7, (3,), verified=True) == 6


@pytest.mark.parametrize("p, n", [(3, 7), (5, 6), (9, 7)])
def test_psi_out_of_range(p, n):
    with pytest.raises(OutOfRangeException):
        psi_formula(p, n)


def test_psi_part_unsupported():
    with pytest.raises(UnsupportedPartitionException):
        psi_part(5, 7, (1, 2))


def test_stability_type3():
    report = stability_check(5, (3,), 6, 7)

    assert report.passed
    assert report.checked == 9


def test_stability_needs_large_m():
    with pytest.raises(SpecViolationException):
        stability_check(5, (2, 1), 3, 6)


def test_stability_unsupported():
    with pytest.raises(UnsupportedPartitionException):
        stability_check(5, (1, 1, 1), 4, 6)


def test_x_representatives():
    listed = [str(m) for r, m in representatives_221(5) if r.name == "X"]

    assert len(set(listed)) == 18
    assert "[0 0 0; 1 0 1; 5 0 0]" in listed
    assert "[0 0 0; 1 5 0; 5 0 0]" not in listed


def test_type3_shape_shifts_with_n():
    top = fingerprint(type3_ring(5, 9, (125, 0)))
    shifted = fingerprint(type3_ring(5, 10, (625, 0)))

    assert top.derived_agemo_depth != shifted.derived_agemo_depth
    assert top.center_order != shifted.center_order
    assert _type3_shape(5, top) == _type3_shape(5, shifted)


def test_type3_shape_keeps_depth():
    first = fingerprint(type3_ring(5, 9, (125, 5)))
    second = fingerprint(type3_ring(5, 9, (125, 25)))

    assert first.derived_order == second.derived_order
    assert _type3_shape(5, first) != _type3_shape(5, second)
