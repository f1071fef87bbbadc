from dataclasses import replace

import pytest

from coexlab.census import representatives_221
from coexlab.census_type3 import census_type3
from coexlab.group_types import make_report
from coexlab.lazard_bch import formal_associativity
from coexlab.lazard_bridge import group_from_liering
from coexlab.liering_core import nilpotency_class
from coexlab.verify_suites import (
    DEFAULT_SEED,
    SUITES,
    SeedException,
    VerifyOptions,
    _bch_tables,
    _corrupt_reps,
    _quotient_failures,
    _trivial_extension,
    census_group_failures,
    get_seed,
    run_suites,
    small_rings,
    suite_formula,
    suite_liering,
    suite_residue,
    suite_type3,
)


def test_seed_default(monkeypatch):
    monkeypatch.delenv("COEXLAB_SEED", raising=False)

    assert get_seed() == DEFAULT_SEED


def test_seed_override(monkeypatch):
    monkeypatch.setenv("COEXLAB_SEED", "42")

    assert get_seed() == 42


def test_seed_invalid(monkeypatch):
    monkeypatch.setenv("COEXLAB_SEED", "forty-two")

    with pytest.raises(SeedException):
        get_seed()


def test_options_rng_deterministic():
    options = VerifyOptions(seed=3)

    assert options.rng("a").random() == options.rng("a").random()
    assert options.rng("a").random() != options.rng("b").random()


def test_suite_names():
    assert list(SUITES) == [
        "residue",
        "liering",
        "orbits",
        "reps",
        "equivalence",
        "construct",
        "stability",
        "type3",
        "formula",
        "lazard",
        "extremal",
        "regular",
    ]


def test_run_suites_skip(mocker):
    passing = mocker.MagicMock(return_value=[make_report("ok", [], 1)])
    failing = mocker.MagicMock(return_value=[make_report("bad", ["broken"], 1)])
    suites = {"first": passing, "second": failing}
    mocker.patch.dict("coexlab.verify_suites.SUITES", suites, clear=True)

    results = run_suites([5, 7], ["second"], VerifyOptions())

    assert [(r.name, r.p, r.skipped) for r in results] == [
        ("first", 5, False),
        ("second", 5, True),
        ("first", 7, False),
        ("second", 7, True),
    ]
    assert all(r.passed for r in results)
    failing.assert_not_called()


def test_run_suites_failure(mocker):
    failing = mocker.MagicMock(return_value=[make_report("bad", ["broken"], 1)])
    mocker.patch.dict("coexlab.verify_suites.SUITES", {"bad": failing}, clear=True)

    (result,) = run_suites([5], [], VerifyOptions())

    assert not result.passed
    failing.assert_called_once_with(5, mocker.ANY)


@pytest.mark.parametrize("p", [5, 7])
def test_suite_residue(p):
    assert all(r.passed for r in suite_residue(p, VerifyOptions()))


def test_suite_liering():
    assert all(r.passed for r in suite_liering(5, VerifyOptions()))


@pytest.mark.parametrize("p", [5, 7])
def test_suite_formula(p):
    assert all(r.passed for r in suite_formula(p, VerifyOptions()))


def test_suite_type3():
    assert all(r.passed for r in suite_type3(5, VerifyOptions()))


def test_suite_type3_fault():
    reports = suite_type3(5, VerifyOptions(inject_fault="type3"))

    assert not reports[0].passed
    assert all(r.passed for r in reports[1:])


def test_corrupt_reps():
    reps = representatives_221(5)

    corrupted = _corrupt_reps(reps)

    assert len(corrupted) == len(reps)
    assert corrupted[10] == reps[0]
    assert corrupted[11:] == reps[11:]


def test_bch_fault():
    tables = _bch_tables(VerifyOptions(inject_fault="bch"))

    assert formal_associativity(2, tables[2])
    assert not formal_associativity(3, tables[3])


def test_bch_tables_clean():
    tables = _bch_tables(VerifyOptions())

    assert all(formal_associativity(d, t) for d, t in tables.items())


def test_small_rings():
    rings = small_rings(5)

    assert [r.order for r in rings] == [625, 625]
    assert [nilpotency_class(r) for r in rings] == [3, 2]


def test_quotient_failures_extension(ring_v):
    assert _quotient_failures(_trivial_extension(ring_v)) == []


def test_quotient_failures_trivial(ring_v):
    failures = _quotient_failures(ring_v)

    assert any("trivial" in f for f in failures)


@pytest.mark.slow
def test_census_group_failures():
    record = census_type3(5, 7)[0]
    group = group_from_liering(record.ring)

    assert census_group_failures(record, group) == []

    shifted = replace(
        record.fingerprint, nilpotency_class=record.fingerprint.nilpotency_class + 1
    )
    failures = census_group_failures(replace(record, fingerprint=shifted), group)

    assert len(failures) == 1
    assert "class" in failures[0]
