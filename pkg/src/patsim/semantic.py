"""Semantic distance between patents from mean-pooled text embeddings.

A document's title and abstract are joined with ``". "`` and handed to an
embedding provider, which returns one vector per token. The token vectors
are mean-pooled into a single document vector; semantic distance is the
cosine of two such vectors mapped affinely from [-1, 1] into [0, 1].
Despite the name, higher means more similar.

Providers are isolated behind a small interface so the scoring core never
knows whether vectors came from a transformer service, a binary cache, or
the seeded test stub.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

import numpy as np

from .errors import ContractViolationError, DegenerateVectorError, DomainError

if TYPE_CHECKING:
    from .corpus import PatentDocument

#: Delimiter between title and abstract. Recorded here (and implicitly in
#: every cache file built from this pipeline) so vectors stay traceable.
TITLE_ABSTRACT_DELIMITER = ". "


@dataclass(frozen=True)
class EmbeddingMatrix:
    """Token-level embedding output for one document: n tokens x d dims."""

    patent_id: str
    vectors: np.ndarray
    model_id: str

    def __post_init__(self):
        v = self.vectors
        if v.ndim != 2 or v.shape[0] < 1 or v.shape[1] < 1:
            raise DomainError(f"embedding matrix must be n x d with n,d >= 1, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise DomainError(f"embedding matrix for {self.patent_id} contains non-finite values")

    @property
    def n_tokens(self) -> int:
        return self.vectors.shape[0]

    @property
    def dimension(self) -> int:
        return self.vectors.shape[1]


@dataclass(frozen=True)
class MeanVector:
    """Mean-pooled document vector. Not required to be unit-norm."""

    patent_id: str
    v: np.ndarray
    model_id: str


class EmbeddingProvider(ABC):
    """Source of token-level document vectors.

    Implementations must be deterministic: the same document under the
    same ``model_id`` always yields the identical matrix. A provider may
    be "pre-pooled" and return n=1 matrices, in which case mean pooling
    is the identity.
    """

    model_id: str
    dimension: int

    @abstractmethod
    def matrices(self, docs: Sequence["PatentDocument"]) -> list[np.ndarray]:
        """Return one n_i x d array per document, in order."""


def document_text(doc: "PatentDocument") -> str:
    """The exact text fed to the embedding model for one patent."""
    return f"{doc.title}{TITLE_ABSTRACT_DELIMITER}{doc.abstract}"


def embed_document(provider: EmbeddingProvider, doc: "PatentDocument") -> EmbeddingMatrix:
    """Fetch and validate the token-vector matrix for one document."""
    return embed_documents(provider, [doc])[0]


def embed_documents(
    provider: EmbeddingProvider, docs: Sequence["PatentDocument"], jobs: int = 1
) -> list[EmbeddingMatrix]:
    """Fetch matrices for many documents, optionally in parallel chunks.

    ``jobs`` bounds concurrent provider calls; output order always matches
    input order regardless of scheduling.
    """
    for doc in docs:
        if not doc.title.strip() or not doc.abstract.strip():
            raise DomainError(f"patent {doc.id}: title and abstract must be non-empty")
    if jobs < 1:
        raise DomainError(f"jobs must be >= 1, got {jobs}")
    if jobs == 1 or len(docs) <= 1:
        raw = provider.matrices(docs)
    else:
        chunk = max(1, (len(docs) + jobs - 1) // jobs)
        batches = [docs[i : i + chunk] for i in range(0, len(docs), chunk)]
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            raw = [m for batch in pool.map(provider.matrices, batches) for m in batch]
    if len(raw) != len(docs):
        raise ContractViolationError(
            f"provider returned {len(raw)} matrices for {len(docs)} documents", provider.model_id
        )
    out = []
    for doc, m in zip(docs, raw):
        m = np.asarray(m)
        if m.ndim != 2 or m.shape[1] != provider.dimension:
            raise ContractViolationError(
                f"matrix for {doc.id} has shape {m.shape}, expected n x {provider.dimension}",
                provider.model_id,
            )
        out.append(EmbeddingMatrix(patent_id=doc.id, vectors=m, model_id=provider.model_id))
    return out


def mean_pool(matrix: EmbeddingMatrix) -> MeanVector:
    """Component-wise arithmetic mean over the token vectors."""
    pooled = matrix.vectors.mean(axis=0, dtype=np.float64)
    return MeanVector(patent_id=matrix.patent_id, v=pooled, model_id=matrix.model_id)


def cosine(a: MeanVector, b: MeanVector) -> float:
    """Cosine similarity of two mean vectors, clamped into [-1, 1]."""
    va, vb = np.asarray(a.v, dtype=np.float64), np.asarray(b.v, dtype=np.float64)
    if va.shape != vb.shape:
        raise DomainError(f"dimension mismatch: {va.shape} vs {vb.shape}")
    na, nb = float(np.linalg.norm(va)), float(np.linalg.norm(vb))
    if na == 0.0 or nb == 0.0:
        which = a.patent_id if na == 0.0 else b.patent_id
        raise DegenerateVectorError(f"zero mean vector for {which}; cosine undefined")
    value = float(np.dot(va, vb) / (na * nb))
    return min(1.0, max(-1.0, value))


def semantic_distance(a: MeanVector, b: MeanVector) -> float:
    """Map cosine similarity into [0, 1]: (cos + 1) / 2."""
    return (cosine(a, b) + 1.0) / 2.0
