"""Technological distance: Jaccard similarity over 3-depth IPC key sets.

Two patents' technological overlap is the size of the intersection of
their deduplicated 3-depth key sets over the size of the union. Identical
profiles score exactly 1.0, disjoint ones 0.0; no smoothing is applied.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

from .errors import DomainError
from .ipc import IpcKey3

if TYPE_CHECKING:
    from .corpus import PatentDocument


@dataclass(frozen=True)
class TechProfile:
    """A patent's deduplicated set of 3-depth IPC keys."""

    patent_id: str
    keys: frozenset[IpcKey3]

    def __post_init__(self):
        if not self.keys:
            raise DomainError(f"patent {self.patent_id}: technological profile must be non-empty")

    @classmethod
    def from_document(cls, doc: "PatentDocument") -> "TechProfile":
        return cls(patent_id=doc.id, keys=doc.ipc_keys)


def jaccard_td(a: TechProfile, b: TechProfile) -> float:
    """Technological distance |a n b| / |a u b|, in [0, 1]."""
    intersection = a.keys & b.keys
    union = a.keys | b.keys
    return len(intersection) / len(union)
