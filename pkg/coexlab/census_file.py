import dataclasses
import hashlib
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Tuple

from coexlab.census_types import PARTITIONS, CensusRecord, Provenance
from coexlab.graded_maps import NotGradedException, make_matrix
from coexlab.liering_core import (
    JacobiFailException,
    OrderIncompatException,
    fingerprint,
    make_liering,
)
from coexlab.residue_core import least_nonresidue, primitive_root
from coexlab.residue_types import AbelianType, BadTypeException, NotAPrimeException

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1

CONVENTIONS = {
    "matrices": "row i is the image of basis vector i, acting on row vectors",
    "brackets": "[x_i, x_j] for i < j, zero pairs omitted",
    "z": "first basis vector of the base ring",
    "m": "n - 3",
}

FINGERPRINT_FIELDS = (
    "n",
    "nilpotency_class",
    "derived_order",
    "center_order",
    "derived_agemo_depth",
    "derived_center_power_order",
)


class FormatErrorException(Exception):
    """Exception for when a census file is malformed or fails re-validation"""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field


@dataclasses.dataclass(frozen=True)
class CensusFile(object):
    header: Dict[str, Any]
    records: Tuple[CensusRecord, ...]
    checksum: str


def make_header(p: int, n: int, partition: str) -> Dict[str, Any]:
    return {
        "conventions": CONVENTIONS,
        "format": FORMAT_VERSION,
        "h": primitive_root(p),
        "n": n,
        "nu": least_nonresidue(p),
        "p": p,
        "partition": partition,
    }


def make_census_file(
    p: int, n: int, partition: str, records: List[CensusRecord]
) -> CensusFile:
    header = make_header(p, n, partition)
    ordered = tuple(sorted(records, key=CensusRecord.sort_key))
    return CensusFile(
        header=header,
        records=ordered,
        checksum=checksum(header, [record_to_dict(r) for r in ordered]),
    )


def checksum(header: Dict[str, Any], records: List[Dict[str, Any]]) -> str:
    payload = json.dumps(
        {"header": header, "records": records},
        sort_keys=True,
        separators=(",", ":"),
        ensure_ascii=False,
    )
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def record_to_dict(record: CensusRecord) -> Dict[str, Any]:
    ring = record.ring
    provenance = record.provenance
    sigma = provenance.sigma

    fp = {name: getattr(record.fingerprint, name) for name in FINGERPRINT_FIELDS}
    fp["mu"] = list(record.fingerprint.invariants.mu)

    return {
        "brackets": [[i, j, list(value)] for i, j, value in ring.nonzero_pairs],
        "exponents": list(ring.atype.exponents),
        "fingerprint": fp,
        "partition": list(record.partition),
        "provenance": {
            "base": provenance.base,
            "m": provenance.m,
            "sigma": [list(row) for row in sigma.entries] if sigma else None,
            "sigma_exponents": list(sigma.atype.exponents) if sigma else None,
            "z": list(provenance.z) if provenance.z is not None else None,
        },
    }


def dumps(census_file: CensusFile) -> str:
    payload = {
        "checksum": census_file.checksum,
        "header": census_file.header,
        "records": [record_to_dict(r) for r in census_file.records],
    }
    return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def loads(text: str) -> CensusFile:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatErrorException(f"line {e.lineno}", e.msg) from e

    header = _require(payload, "header", dict, "")
    records_raw = _require(payload, "records", list, "")
    stored = _require(payload, "checksum", str, "")

    p = _require(header, "p", int, "header")
    n = _require(header, "n", int, "header")

    expected = checksum(header, records_raw)
    if stored != expected:
        raise FormatErrorException("checksum", f"stored {stored}, computed {expected}")

    records = tuple(
        record_from_dict(raw, p, n, f"records[{idx}]")
        for idx, raw in enumerate(records_raw)
    )
    return CensusFile(header=header, records=records, checksum=stored)


def record_from_dict(raw: Dict[str, Any], p: int, n: int, where: str) -> CensusRecord:
    exponents = _int_list(
        _require(raw, "exponents", list, where), f"{where}.exponents"
    )
    try:
        atype = AbelianType(p, tuple(exponents))
    except (NotAPrimeException, BadTypeException) as e:
        raise FormatErrorException(f"{where}.exponents", str(e)) from e

    table = {}
    for k, entry in enumerate(_require(raw, "brackets", list, where)):
        field = f"{where}.brackets[{k}]"
        if not isinstance(entry, list) or len(entry) != 3:
            raise FormatErrorException(field, "expected [i, j, value]")
        i, j = _int_list(entry[:2], field)
        value = _residues(entry[2], atype, field)
        if not 0 <= i < j < atype.rank:
            raise FormatErrorException(field, f"bad index pair ({i}, {j})")
        table[(i, j)] = value

    try:
        ring = make_liering(atype, table)
    except (OrderIncompatException, JacobiFailException) as e:
        raise FormatErrorException(f"{where}.brackets", str(e)) from e

    partition = tuple(_int_list(_require(raw, "partition", list, where), where))
    if partition not in PARTITIONS:
        raise FormatErrorException(f"{where}.partition", f"unknown {partition}")

    fp = fingerprint(ring)
    stored_fp = _require(raw, "fingerprint", dict, where)
    for name in FINGERPRINT_FIELDS:
        if _require(stored_fp, name, int, f"{where}.fingerprint") != getattr(fp, name):
            raise FormatErrorException(
                f"{where}.fingerprint.{name}",
                f"stored {stored_fp[name]}, recomputed {getattr(fp, name)}",
            )
    if fp.invariants.coexponent != sum(partition):
        raise FormatErrorException(
            f"{where}.partition", f"coexponent is {fp.invariants.coexponent}"
        )

    return CensusRecord(
        p=p,
        n=n,
        partition=partition,
        ring=ring,
        fingerprint=fp,
        provenance=_provenance(
            _require(raw, "provenance", dict, where), p, f"{where}.provenance"
        ),
    )


def save(path: Path, census_file: CensusFile):
    path.write_text(dumps(census_file), encoding="utf-8")
    logger.info(f"Wrote {len(census_file.records)} records to {path}")


def load(path: Path) -> CensusFile:
    return loads(path.read_text(encoding="utf-8"))


def export_import_roundtrip(census_file: CensusFile) -> bool:
    text = dumps(census_file)
    restored = loads(text)
    return restored == census_file and dumps(restored) == text


def _provenance(raw, p, where):
    base = _require(raw, "base", str, where)
    m = raw.get("m")
    if m is not None and (not isinstance(m, int) or isinstance(m, bool)):
        raise FormatErrorException(f"{where}.m", "expected an integer")

    sigma = None
    z = None
    if raw.get("sigma") is not None:
        exponents = _int_list(
            _require(raw, "sigma_exponents", list, where), f"{where}.sigma_exponents"
        )
        try:
            atype = AbelianType(p, tuple(exponents))
        except BadTypeException as e:
            raise FormatErrorException(f"{where}.sigma_exponents", str(e)) from e
        rows = [
            _residues(row, atype, f"{where}.sigma[{i}]")
            for i, row in enumerate(_require(raw, "sigma", list, where))
        ]
        try:
            sigma = make_matrix(atype, rows)
        except NotGradedException as e:
            raise FormatErrorException(f"{where}.sigma", str(e)) from e
        z = _residues(_require(raw, "z", list, where), atype, f"{where}.z")

    return Provenance(base=base, sigma=sigma, z=z, m=m)


def _require(raw, key, kind, where):
    field = f"{where}.{key}" if where else key
    if not isinstance(raw, dict) or key not in raw:
        raise FormatErrorException(field, "missing")
    value = raw[key]
    if not isinstance(value, kind) or (kind is int and isinstance(value, bool)):
        raise FormatErrorException(field, f"expected {kind.__name__}")
    return value


def _int_list(values, field):
    if not all(isinstance(v, int) and not isinstance(v, bool) for v in values):
        raise FormatErrorException(field, "expected integers only")
    return list(values)


def _residues(values, atype, field):
    if not isinstance(values, list) or len(values) != atype.rank:
        raise FormatErrorException(field, f"expected {atype.rank} residues")
    _int_list(values, field)
    for k, (v, m) in enumerate(zip(values, atype.moduli)):
        if not 0 <= v < m:
            raise FormatErrorException(f"{field}[{k}]", f"{v} is not a residue mod {m}")
    return tuple(values)
