from dataclasses import dataclass
from typing import Optional, Tuple

from coexlab.graded_maps import GradedMatrix
from coexlab.liering_types import LieRing, RingFingerprint
from coexlab.residue_types import GroupElement

Partition = Tuple[int, ...]

PARTITIONS: Tuple[Partition, ...] = ((1, 1, 1), (2, 1), (3,))


@dataclass(frozen=True)
class Provenance(object):
    """Where a census ring comes from: a base ring and its cyclic extension"""

    base: str
    sigma: Optional[GradedMatrix] = None
    z: Optional[GroupElement] = None
    m: Optional[int] = None


@dataclass(frozen=True)
class CensusRecord(object):
    p: int
    n: int
    partition: Partition
    ring: LieRing
    fingerprint: RingFingerprint
    provenance: Provenance

    @property
    def derived_order(self) -> int:
        return self.fingerprint.derived_order

    @property
    def nilpotency_class(self) -> int:
        return self.fingerprint.nilpotency_class

    def sort_key(self):
        return (
            PARTITIONS.index(self.partition),
            -self.derived_order,
            self.ring.nonzero_pairs,
            self.ring.atype.exponents,
            self.provenance.sigma.flat if self.provenance.sigma else (),
        )
