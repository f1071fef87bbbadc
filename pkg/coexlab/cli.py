import argparse
import logging
import sys
from pathlib import Path
from typing import Optional

from sympy import isprime

from coexlab.census import (
    MismatchException,
    UnsupportedPartitionException,
    census,
    census_z,
    class_histogram,
    psi_formula,
    psi_part,
    representatives_221,
    transversal_221,
)
from coexlab.census_file import FormatErrorException, load, make_census_file, save
from coexlab.census_type3 import OutOfRangeException
from coexlab.census_types import PARTITIONS
from coexlab.constructions import SpecViolationException
from coexlab.constructions_extremal import ParameterViolationException, extremal_group
from coexlab.equivalence_engine import ClosureBreakException, orbit_partition
from coexlab.group_invariants import group_invariants
from coexlab.lazard_bridge import (
    ClassTooHighException,
    ReconstructionDivergenceException,
)
from coexlab.liering_core import TooLargeException
from coexlab.verify_suites import (
    FAULTS,
    SUITES,
    SeedException,
    VerifyOptions,
    get_seed,
    run_suites,
)
from coexlab.version import __version__

logger = logging.getLogger(__name__)

RUN_ERRORS = (
    ClassTooHighException,
    ClosureBreakException,
    MismatchException,
    OutOfRangeException,
    ParameterViolationException,
    ReconstructionDivergenceException,
    SpecViolationException,
    TooLargeException,
    UnsupportedPartitionException,
)

PARTITION_CHOICES = {
    "1,1,1": [(1, 1, 1)],
    "2,1": [(2, 1)],
    "3": [(3,)],
    "all": list(PARTITIONS),
}


def cli(argv):
    args = parse_args(argv)

    _setup_logging(args.verbose, args.log)

    try:
        is_ok = COMMANDS[args.command](args)
    except RUN_ERRORS as e:
        logger.error(str(e))
        sys.exit(1)

    if not is_ok:
        sys.exit(1)


def main():  # pragma: no cover
    try:
        cli(sys.argv[1:])
    except KeyboardInterrupt:
        sys.exit(1)


def run_census(args) -> bool:
    if args.check:
        return check_census_file(args.check)

    partitions = PARTITION_CHOICES[args.partition]
    ring_partitions = [part for part in partitions if part != (1, 1, 1)]
    records = census(args.p, args.n, ring_partitions)

    counts = {}
    for partition in partitions:
        if partition == (1, 1, 1):
            counts[partition] = psi_part(args.p, args.n, partition)
        else:
            counts[partition] = sum(1 for r in records if r.partition == partition)

    for partition, count in counts.items():
        print(f"{_partition_name(partition)}: {count}")
    histogram = ", ".join(f"{k}: {v}" for k, v in class_histogram(records).items())
    print(f"classes: {histogram or '-'}")

    total = sum(counts.values())
    print(f"total: {total}")
    if len(partitions) == len(PARTITIONS):
        print(f"formula: {psi_formula(args.p, args.n)}")

    if args.out:
        save(args.out, make_census_file(args.p, args.n, args.partition, records))

    return True


def check_census_file(path: Path) -> bool:
    try:
        census_file = load(path)
    except FormatErrorException as e:
        logger.error(f"Invalid census file '{path}': {e}")
        return False

    print(f"{path}: {len(census_file.records)} records, checksum ok")
    return True


def run_verify(args) -> bool:
    options = VerifyOptions(
        samples=args.samples,
        pairs=args.pairs,
        direct_pairs=args.direct_pairs,
        inject_fault=args.inject_fault,
        seed=args.seed,
        progress=args.progress,
    )

    is_ok = True
    for result in run_suites(args.p, args.skip, options):
        if result.skipped:
            print(f"[p={result.p}] {result.name}: skipped")
            continue
        for report in result.reports:
            print(f"[p={result.p}] {result.name}: {report}")
            for failure in report.failures:
                logger.error(f"{report.name}: {failure}")
        is_ok = is_ok and result.passed

    return is_ok


def run_formula(args) -> bool:
    parts = {
        partition: psi_part(args.p, args.n, partition, verified=args.verified)
        for partition in PARTITIONS
    }
    for partition, count in parts.items():
        print(f"{_partition_name(partition)}: {count}")

    assembled = sum(parts.values())
    closed = psi_formula(args.p, args.n)
    print(f"assembled: {assembled}")
    print(f"closed form: {closed}")

    if assembled != closed:
        logger.error(f"Assembled count {assembled} differs from {closed}")
        return False
    return True


def run_extremal(args) -> bool:
    stages = extremal_group(args.p, args.f, args.n)
    for stage in stages:
        invariants = group_invariants(stage, progress=args.progress)
        print(
            f"{stage}: order {invariants.order}, exponent {invariants.exponent},"
            f" class {invariants.nilpotency_class},"
            f" coexponent {invariants.coexponent}, μ {invariants.mu}"
        )
    return True


def run_orbit(args) -> bool:
    ring = next(r for r in transversal_221(args.p) if r.name == args.ring)
    listed = [m for r, m in representatives_221(args.p) if r.name == ring.name]
    partition = orbit_partition(ring, census_z(ring), listed, progress=args.progress)

    for cls, (size, rep) in enumerate(zip(partition.sizes, partition.representatives)):
        hits = [str(m) for m, label in zip(listed, partition.labels) if label == cls]
        print(f"{cls}: size {size}, canonical {rep}, listed {', '.join(hits) or '-'}")
    print(f"{ring}: {partition.count} classes")

    return True


COMMANDS = {
    "census": run_census,
    "verify": run_verify,
    "formula": run_formula,
    "extremal": run_extremal,
    "orbit": run_orbit,
}


def parse_args(argv):
    parser = argparse.ArgumentParser(
        prog="coexlab",
        description="Classifies nilpotent Lie rings of coexponent 3 and their p-groups",
    )
    parser.add_argument(
        "--version",
        action="version",
        version=f"%(prog)s {__version__}",  # noqa: WPS323
    )

    shared = argparse.ArgumentParser(add_help=False)
    shared_schema = {
        "--progress": {
            "action": "store_true",
            "default": False,
            "help": "show progress bars for long enumerations",
        },
        "--log": {
            "type": Path,
            "metavar": "FILE",
            "help": "file to store program log",
        },
        "--verbose": {
            "action": "store_true",
            "default": False,
            "help": "output debug information",
        },
    }
    for arg, arg_params in shared_schema.items():
        shared.add_argument(arg, **arg_params)

    subparsers = parser.add_subparsers(dest="command", required=True)
    for command, (help_text, schema) in _command_schemas().items():
        subparser = subparsers.add_parser(command, help=help_text, parents=[shared])
        for arg, arg_params in schema.items():
            subparser.add_argument(arg, **arg_params)

    args = parser.parse_args(argv)
    _check_args(parser, args)

    return args


def _command_schemas():
    prime = {"type": int, "metavar": "PRIME", "help": "prime p, at least 5"}
    degree = {"type": int, "metavar": "N", "help": "log_p of the ring order"}

    return {
        "census": (
            "build the census of rings of order p^n",
            {
                "--p": prime,
                "--n": degree,
                "--partition": {
                    "choices": list(PARTITION_CHOICES),
                    "default": "all",
                    "help": "partition of the coexponent (default: all)",
                },
                "--out": {
                    "type": Path,
                    "metavar": "FILE",
                    "help": "write the census as JSON",
                },
                "--check": {
                    "type": Path,
                    "metavar": "FILE",
                    "help": "re-validate an existing census file instead",
                },
            },
        ),
        "verify": (
            "run the verification suites",
            {
                "--p": {
                    "type": int,
                    "action": "append",
                    "metavar": "PRIME",
                    "help": "prime to verify at, may repeat (default: 5)",
                },
                "--skip": {
                    "choices": list(SUITES),
                    "action": "append",
                    "default": [],
                    "help": "suite to skip, may repeat",
                },
                "--inject-fault": {
                    "choices": FAULTS,
                    "help": "corrupt one input as a negative control",
                },
                "--samples": {
                    "type": int,
                    "default": 1_000_000,
                    "help": "associativity triples (default: 1000000)",
                },
                "--pairs": {
                    "type": int,
                    "default": 2000,
                    "help": "regularity pairs (default: 2000)",
                },
                "--direct-pairs": {
                    "type": int,
                    "default": 40,
                    "help": "representative pairs for the direct search (default: 40)",
                },
            },
        ),
        "formula": (
            "compare the assembled count with the closed form",
            {
                "--p": {**prime, "required": True},
                "--n": {**degree, "required": True},
                "--verified": {
                    "action": "store_true",
                    "default": False,
                    "help": "recount orbits by brute force instead of list sizes",
                },
            },
        ),
        "extremal": (
            "build the extremal groups of coexponent f",
            {
                "--p": {**prime, "required": True},
                "--f": {"type": int, "required": True, "help": "coexponent"},
                "--n": {**degree, "required": True},
            },
        ),
        "orbit": (
            "list the derivation classes of a base ring",
            {
                "--ring": {"choices": ["V", "W", "X"], "required": True},
                "--p": {**prime, "required": True},
            },
        ),
    }


def _check_args(parser, args):
    if args.command == "verify":
        args.p = args.p or [5]
        try:
            args.seed = get_seed()
        except SeedException as e:
            parser.error(str(e))

    if args.command == "census" and args.check is None:
        if args.p is None or args.n is None:
            parser.error("census needs --p and --n, or --check FILE")

    primes = args.p if isinstance(args.p, list) else [args.p]
    for p in primes:
        if p is not None and not isprime(p):
            parser.error("p must be prime")
        if p is not None and args.command == "extremal" and p < args.f + 1:
            parser.error("p must be at least f + 1")
        if p is not None and args.command != "extremal" and p < 5:
            parser.error("p must be at least 5")

    n = getattr(args, "n", None)
    if n is not None and args.command in {"census", "formula"} and n < 7:
        parser.error("n must be at least 7")
    if args.command == "extremal" and args.n < args.f + 2:
        parser.error("n must be at least f + 2")


def _partition_name(partition):
    return ",".join(map(str, partition))


def _setup_logging(is_verbose: bool, log_file: Optional[Path]):
    logging.basicConfig(format="%(levelname)s: %(message)s")

    logging.getLogger("coexlab").setLevel(logging.DEBUG if is_verbose else logging.INFO)

    if log_file:
        file_handler = logging.FileHandler(log_file)
        file_handler.setFormatter(
            logging.Formatter("%(asctime)s [%(levelname)-8.8s] %(message)s")
        )
        logging.getLogger("coexlab").addHandler(file_handler)
