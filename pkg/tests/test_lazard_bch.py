import pytest
from sympy import Rational

from coexlab.lazard_bch import (
    X,
    Y,
    DegreeUnsupportedException,
    FreeNilpotentElement,
    addition_word,
    bch_table,
    bracket_word,
    formal_associativity,
    free_bch,
    group_word_log,
    lie_polynomial,
    lyndon_basis,
    lyndon_words,
    standard_bracketing,
    with_coefficient,
    word_degree,
)


def test_table_truncation():
    table = bch_table(2)

    assert table.degree == 2
    assert [w for w, _ in table.terms] == [X, Y, (X, Y)]
    assert table.coefficient((X, Y)) == Rational(1, 2)
    assert table.coefficient((X, (X, Y))) == 0


@pytest.mark.parametrize("degree", [0, 6])
def test_table_unsupported(degree):
    with pytest.raises(DegreeUnsupportedException):
        bch_table(degree)


@pytest.mark.parametrize(
    "word, expected",
    [
        (X, 1),
        ((X, Y), 2),
        ((Y, (X, (X, Y))), 4),
    ],
)
def test_word_degree(word, expected):
    assert word_degree(word) == expected


@pytest.mark.parametrize("degree", [1, 2, 3, 4, 5])
def test_formal_associativity(degree):
    assert formal_associativity(degree)


def test_formal_associativity_detects_bad_coefficient():
    bad = with_coefficient(bch_table(3), (X, Y), Rational(1, 3))

    assert bad.coefficient((X, Y)) == Rational(1, 3)
    assert not formal_associativity(3, bad)


def test_bch_inverse_vanishes():
    x = FreeNilpotentElement.letter(0, 4)

    assert free_bch(bch_table(4), x, -x).is_zero


def test_lyndon_words():
    assert list(lyndon_words(2, 3)) == [(0,), (0, 0, 1), (0, 1), (0, 1, 1), (1,)]


def test_standard_bracketing():
    assert standard_bracketing((0, 0, 1)) == (0, (0, 1))
    assert standard_bracketing((0, 1, 1)) == ((0, 1), 1)


@pytest.mark.parametrize("degree, size", [(2, 1), (3, 2), (4, 3), (5, 6)])
def test_lyndon_basis_size(degree, size):
    assert len(lyndon_basis(degree)) == size


def test_lie_polynomial():
    poly = lie_polynomial((X, Y), 2)

    assert poly.terms == {(0, 1): 1, (1, 0): -1}


@pytest.mark.parametrize("degree", [2, 3, 4])
def test_addition_word(degree):
    x = FreeNilpotentElement.letter(X, degree)
    y = FreeNilpotentElement.letter(Y, degree)

    assert group_word_log(addition_word(degree), degree) == x + y


@pytest.mark.parametrize("degree", [2, 3, 4])
def test_bracket_word(degree):
    expected = lie_polynomial((X, Y), degree)

    assert group_word_log(bracket_word(degree), degree) == expected
