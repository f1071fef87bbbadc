import itertools
import logging
from typing import Dict, List, Tuple

from sympy import isprime, mod_inverse

from coexlab.census_types import CensusRecord, Provenance
from coexlab.group_types import CheckReport, make_report
from coexlab.liering_core import fingerprint, make_liering
from coexlab.liering_types import LieRing
from coexlab.residue_core import primitive_root
from coexlab.residue_types import AbelianType

logger = logging.getLogger(__name__)

# [u, v] = x·u + y·v
Bracket = Tuple[int, int]

PARTITION = (3,)
V_EXPONENT = 3


class OutOfRangeException(Exception):
    """Exception for when (p, n) falls outside p ≥ 5, n ≥ 7"""


def check_range(p: int, n: int):
    if not isprime(p) or p < 5:
        raise OutOfRangeException(f"p = {p} must be a prime of at least 5")
    if n < 7:
        raise OutOfRangeException(f"n = {n} must be at least 7")


def type3_count(n: int) -> int:
    if n < 7:
        raise OutOfRangeException(f"n = {n} must be at least 7")
    return {7: 6, 8: 8}.get(n, 9)


def type3_table(p: int, n: int) -> List[Bracket]:
    """Nilpotent brackets on ℤ/p^(n-3) ⊕ ℤ/p³, by derived order p³, p², p or 1"""

    if n == 7:
        rows = [[(p, 0)], [(p**2, 0), (0, p)]]
    elif n == 8:
        rows = [[(p**2, 0), (p**2, p)], [(p**3, 0), (p**3, p**2), (0, p)]]
    else:
        rows = [
            [(p ** (n - 6), p), (p ** (n - 6), p**2), (p ** (n - 6), 0)],
            [(p ** (n - 5), 0), (p ** (n - 5), p**2), (0, p)],
        ]
    rows.append([(p ** (n - 4), 0), (0, p**2), (0, 0)])

    return list(itertools.chain.from_iterable(rows))


def type3_ring(p: int, n: int, bracket: Bracket, name: str = "") -> LieRing:
    atype = AbelianType(p, (n - V_EXPONENT, V_EXPONENT))
    x, y = bracket
    return make_liering(
        atype, {(0, 1): (x, y)}, name=name or _bracket_name(p, n, bracket)
    )


def census_type3(p: int, n: int) -> List[CensusRecord]:
    check_range(p, n)

    records = []
    for bracket in type3_table(p, n):
        ring = type3_ring(p, n, bracket)
        records.append(
            CensusRecord(
                p=p,
                n=n,
                partition=PARTITION,
                ring=ring,
                fingerprint=fingerprint(ring),
                provenance=Provenance(base="type3"),
            )
        )

    return sorted(records, key=CensusRecord.sort_key)


def bracket_space(p: int, n: int) -> List[Bracket]:
    """Every [u, v] with p³[u, v] = 0 whose v-part is divisible by p"""

    return [
        (x, y)
        for x in range(0, p ** (n - 3), p ** (n - 6))
        for y in range(0, p**3, p)
    ]


def bracket_moves(p: int, n: int):
    """Basis changes of ℤ/p^(n-3)·u ⊕ ℤ/p³·v acting on [u, v]

    A change φ sends the bracket c to det(φ)⁻¹·φ(c).
    """

    top = p ** (n - 3)
    low = p**3
    shift = p ** (n - 6)
    scalars = [primitive_root(p), 1 + p]

    def shear_u(c):  # noqa: WPS430
        x, y = c
        return x, (x + y) % low

    def shear_v(c):  # noqa: WPS430
        x, y = c
        return (x + y * shift) % top, y

    moves = [shear_u, shear_v]
    for k in scalars:
        k_inv = int(mod_inverse(k, top))
        moves.append(lambda c, k_inv=k_inv: (c[0], c[1] * k_inv % low))
        moves.append(lambda c, k_inv=k_inv: (c[0] * k_inv % top, c[1]))

    return moves


def type3_orbits(p: int, n: int) -> Dict[Bracket, int]:
    moves = bracket_moves(p, n)
    class_of = {}
    cls = -1

    for start in bracket_space(p, n):
        if start in class_of:
            continue
        cls += 1
        class_of[start] = cls
        frontier = [start]
        while frontier:
            nxt = []
            for c in frontier:
                for move in moves:
                    image = move(c)
                    if image not in class_of:
                        class_of[image] = cls
                        nxt.append(image)
            frontier = nxt

    return class_of


def type3_check(p: int, n: int, table: List[Bracket] = None) -> CheckReport:
    """Brute-force orbit count against the table and the expected count"""

    table = type3_table(p, n) if table is None else table
    class_of = type3_orbits(p, n)
    count = len(set(class_of.values()))
    expected = type3_count(n)

    failures = []
    if count != expected:
        failures.append(f"n={n}: {count} orbits, expected {expected}")

    labels = []
    for bracket in table:
        reduced = (bracket[0] % p ** (n - 3), bracket[1] % p**3)
        if reduced not in class_of:
            failures.append(f"n={n}: {_bracket_name(p, n, bracket)} is not nilpotent")
            continue
        labels.append(class_of[reduced])

    if len(set(labels)) != len(labels):
        failures.append(f"n={n}: table representatives share an orbit")
    if set(labels) != set(class_of.values()):
        failures.append(f"n={n}: table misses {count - len(set(labels))} orbits")

    logger.debug(f"Type (3) at p={p}, n={n}: {count} orbits")
    return make_report(f"type (3) census n={n}", failures, len(class_of))


def _bracket_name(p, n, bracket):
    x, y = bracket
    terms = []
    if x:
        terms.append(f"{_power_name(p, x)}u")
    if y:
        terms.append(f"{_power_name(p, y)}v")
    return " + ".join(terms) or "0"


def _power_name(p, value):
    k = 0
    while value % p == 0:
        value //= p
        k += 1
    name = "" if value == 1 else f"{value}·"
    if k == 1:
        name += "p"
    elif k > 1:
        name += f"p^{k}"
    return name
