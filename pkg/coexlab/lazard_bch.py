import functools
import itertools
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterator, List, Tuple, Union

from sympy import Matrix, Rational

Word = Union[int, Tuple["Word", "Word"]]
GroupWord = Tuple[Tuple[Word, Rational], ...]

X, Y = 0, 1
MAX_DEGREE = 5


class DegreeUnsupportedException(Exception):
    """Exception for when a BCH table beyond the hardcoded degree is requested"""


@dataclass(frozen=True)
class BCHTable(object):
    degree: int
    terms: Tuple[Tuple[Word, Rational], ...]

    def coefficient(self, word: Word) -> Rational:
        return next((c for w, c in self.terms if w == word), Rational(0))


_BCH_TERMS = (
    (X, Rational(1)),
    (Y, Rational(1)),
    ((X, Y), Rational(1, 2)),
    ((X, (X, Y)), Rational(1, 12)),
    ((Y, (Y, X)), Rational(1, 12)),
    ((Y, (X, (X, Y))), Rational(-1, 24)),
    ((Y, (Y, (Y, (Y, X)))), Rational(-1, 720)),
    ((X, (X, (X, (X, Y)))), Rational(-1, 720)),
    ((X, (Y, (Y, (Y, X)))), Rational(1, 360)),
    ((Y, (X, (X, (X, Y)))), Rational(1, 360)),
    ((Y, (X, (Y, (X, Y)))), Rational(1, 120)),
    ((X, (Y, (X, (Y, X)))), Rational(1, 120)),
)


def word_degree(word: Word) -> int:
    if isinstance(word, int):
        return 1
    return word_degree(word[0]) + word_degree(word[1])


def bch_table(degree: int) -> BCHTable:
    if not 1 <= degree <= MAX_DEGREE:
        raise DegreeUnsupportedException(
            f"BCH is hardcoded through degree {MAX_DEGREE}, got {degree}"
        )

    return BCHTable(
        degree=degree,
        terms=tuple((w, c) for w, c in _BCH_TERMS if word_degree(w) <= degree),
    )


def with_coefficient(table: BCHTable, word: Word, value: Rational) -> BCHTable:
    return BCHTable(
        degree=table.degree,
        terms=tuple((w, value if w == word else c) for w, c in table.terms),
    )


def evaluate_word(word: Word, letters, bracket: Callable, cache=None):
    if cache is None:
        cache = {}
    if word in cache:
        return cache[word]

    if isinstance(word, int):
        value = letters[word]
    else:
        value = bracket(
            evaluate_word(word[0], letters, bracket, cache),
            evaluate_word(word[1], letters, bracket, cache),
        )
    cache[word] = value
    return value


def bch_evaluate(
    table: BCHTable,
    x,
    y,
    add: Callable,
    scale: Callable,
    bracket: Callable,
):
    """Σ c·w(x, y) over the table, scale receiving the rational coefficient"""

    cache = {}
    total = None
    for word, coeff in table.terms:
        term = scale(coeff, evaluate_word(word, (x, y), bracket, cache))
        total = term if total is None else add(total, term)
    return total


@dataclass(frozen=True)
class FreeNilpotentElement(object):
    """Element of the free associative algebra truncated above a degree.

    terms maps words over the letters 0, 1, 2, … to exact rationals.
    """

    degree: int
    terms: Dict[Tuple[int, ...], Rational] = field(default_factory=dict)

    @classmethod
    def letter(cls, i: int, degree: int) -> "FreeNilpotentElement":
        return cls(degree=degree, terms={(i,): Rational(1)})

    def __add__(self, other):
        terms = dict(self.terms)
        for w, c in other.terms.items():
            terms[w] = terms.get(w, 0) + c
        return FreeNilpotentElement(self.degree, _prune(terms))

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, q) -> "FreeNilpotentElement":
        if q == 0:
            return FreeNilpotentElement(self.degree)
        return FreeNilpotentElement(
            self.degree, {w: c * q for w, c in self.terms.items()}
        )

    def __mul__(self, other):
        terms = {}
        for (u, a), (v, b) in itertools.product(
            self.terms.items(), other.terms.items()
        ):
            if len(u) + len(v) <= self.degree:
                w = u + v
                terms[w] = terms.get(w, 0) + a * b
        return FreeNilpotentElement(self.degree, _prune(terms))

    def bracket(self, other) -> "FreeNilpotentElement":
        return self * other - other * self

    def homogeneous(self, d: int) -> Dict[Tuple[int, ...], Rational]:
        return {w: c for w, c in self.terms.items() if len(w) == d}

    @property
    def is_zero(self) -> bool:
        return not self.terms


def free_bch(table: BCHTable, a, b) -> FreeNilpotentElement:
    return bch_evaluate(
        table,
        a,
        b,
        add=lambda u, v: u + v,
        scale=lambda q, u: u.scale(q),
        bracket=lambda u, v: u.bracket(v),
    )


def formal_associativity(degree: int, table: BCHTable = None) -> bool:
    """BCH(x, BCH(y, z)) = BCH(BCH(x, y), z) and BCH(x, -x) = 0, exactly"""

    if table is None:
        table = bch_table(degree)

    x, y, z = (FreeNilpotentElement.letter(i, degree) for i in range(3))

    left = free_bch(table, x, free_bch(table, y, z))
    right = free_bch(table, free_bch(table, x, y), z)

    return left == right and free_bch(table, x, -x).is_zero


def lyndon_words(alphabet: int, max_length: int) -> Iterator[Tuple[int, ...]]:
    """Duval's generation in lexicographic order"""

    w = [-1]
    while w:
        w[-1] += 1
        yield tuple(w)
        m = len(w)
        while len(w) < max_length:
            w.append(w[len(w) - m])
        while w and w[-1] == alphabet - 1:
            w.pop()


def standard_bracketing(word: Tuple[int, ...]) -> Word:
    if len(word) == 1:
        return word[0]

    lyndon = set(lyndon_words(max(word) + 1, len(word)))
    for split in range(1, len(word)):
        if word[split:] in lyndon:
            return (
                standard_bracketing(word[:split]),
                standard_bracketing(word[split:]),
            )

    raise ValueError(f"{word} is not a Lyndon word")


def lyndon_basis(degree: int) -> List[Word]:
    return [
        standard_bracketing(w) for w in lyndon_words(2, degree) if len(w) == degree
    ]


def lie_polynomial(word: Word, degree: int) -> FreeNilpotentElement:
    letters = [FreeNilpotentElement.letter(i, degree) for i in range(2)]
    return evaluate_word(word, letters, lambda u, v: u.bracket(v))


def group_word_log(word: GroupWord, degree: int) -> FreeNilpotentElement:
    """log of a product of commutator words raised to rational powers"""

    table = bch_table(degree)
    letters = [FreeNilpotentElement.letter(i, degree) for i in range(2)]

    def commutator_log(u, v):  # noqa: WPS430
        return free_bch(table, free_bch(table, -u, -v), free_bch(table, u, v))

    total = FreeNilpotentElement(degree)
    for tree, q in word:
        factor = evaluate_word(tree, letters, commutator_log).scale(q)
        total = free_bch(table, total, factor)
    return total


@functools.lru_cache(maxsize=None)
def addition_word(degree: int) -> GroupWord:
    """Group word in g, h whose Lie image is x + y"""

    target = FreeNilpotentElement.letter(X, degree) + FreeNilpotentElement.letter(
        Y, degree
    )
    return _correct(((X, Rational(1)), (Y, Rational(1))), target, degree)


@functools.lru_cache(maxsize=None)
def bracket_word(degree: int) -> GroupWord:
    """Group word in g, h whose Lie image is [x, y]"""

    target = lie_polynomial((X, Y), degree)
    return _correct((((X, Y), Rational(1)),), target, degree)


def _correct(start: GroupWord, target, degree: int) -> GroupWord:
    word = list(start)
    for d in range(2, degree + 1):
        residual = (target - group_word_log(tuple(word), degree)).homogeneous(d)
        if not residual:
            continue
        for tree, q in _lyndon_coordinates(residual, d):
            word.append((tree, q))
    return tuple(word)


def _lyndon_coordinates(part, d):
    basis = lyndon_basis(d)
    polys = [lie_polynomial(b, d).homogeneous(d) for b in basis]
    words = sorted(set(part).union(*polys))

    system = Matrix([[poly.get(w, 0) for poly in polys] for w in words])
    rhs = Matrix([part.get(w, 0) for w in words])
    solution, _ = system.gauss_jordan_solve(rhs)

    return [(b, Rational(q)) for b, q in zip(basis, solution) if q != 0]


def _prune(terms):
    return {w: c for w, c in terms.items() if c != 0}
