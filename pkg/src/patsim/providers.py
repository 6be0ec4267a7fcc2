"""Embedding provider implementations: seeded stub, binary cache, remote HTTP.

The stub keeps the whole test suite and CI offline: token vectors are
drawn from a PCG64 generator seeded by a keyed hash of (seed, position,
token), so the same text always embeds to the same matrix, in any
process, on any platform.
"""

from __future__ import annotations

import hashlib
from pathlib import Path
from typing import TYPE_CHECKING, Sequence

import numpy as np
import requests

from .errors import ContractViolationError, TransportError, VectorCacheError
from .semantic import EmbeddingProvider, document_text
from .veccache import VectorCache

if TYPE_CHECKING:
    from .corpus import PatentDocument

REMOTE_MAX_BATCH = 64


class StubProvider(EmbeddingProvider):
    """Deterministic hash-based token embeddings for tests and dry runs."""

    def __init__(self, seed: int = 0, dimension: int = 16):
        self.seed = seed
        self.dimension = dimension
        self.model_id = f"stub-v1-d{dimension}-s{seed}"
        self._token_vectors: dict[tuple[int, str], np.ndarray] = {}

    def _token_vector(self, position: int, token: str) -> np.ndarray:
        cached = self._token_vectors.get((position, token))
        if cached is not None:
            return cached
        digest = hashlib.blake2b(
            f"{self.seed}|{position}|{token}".encode("utf-8"), digest_size=8
        ).digest()
        rng = np.random.default_rng(int.from_bytes(digest, "little"))
        vec = rng.standard_normal(self.dimension)
        self._token_vectors[(position, token)] = vec
        return vec

    def matrices(self, docs: Sequence["PatentDocument"]) -> list[np.ndarray]:
        out = []
        for doc in docs:
            tokens = document_text(doc).lower().split()
            rows = [self._token_vector(i, tok) for i, tok in enumerate(tokens)]
            out.append(np.vstack(rows))
        return out


class CacheProvider(EmbeddingProvider):
    """Serves matrices from a binary vector cache file, keyed by patent id."""

    def __init__(self, path: str | Path):
        self._cache = VectorCache.load(path)
        self.model_id = self._cache.model_id
        self.dimension = self._cache.dimension

    def __contains__(self, patent_id: str) -> bool:
        return patent_id in self._cache

    def matrices(self, docs: Sequence["PatentDocument"]) -> list[np.ndarray]:
        missing = [doc.id for doc in docs if doc.id not in self._cache]
        if missing:
            raise VectorCacheError(
                f"{len(missing)} document(s) not present in cache: {', '.join(missing[:5])}"
            )
        return [self._cache.matrix(doc.id) for doc in docs]


class RemoteProvider(EmbeddingProvider):
    """Client for the embedding sidecar's HTTP/JSON interface.

    Fetches ``GET /info`` once at construction for model metadata, then
    batches ``POST /embed`` requests. ``pooled=True`` asks the service for
    pre-pooled vectors (n=1 matrices), which makes mean pooling a no-op.
    """

    def __init__(
        self,
        base_url: str,
        timeout: float = 60.0,
        pooled: bool = False,
        batch_size: int = REMOTE_MAX_BATCH,
        session: requests.Session | None = None,
    ):
        self._base = base_url.rstrip("/")
        self._timeout = timeout
        self._pooled = pooled
        self._batch = max(1, min(batch_size, REMOTE_MAX_BATCH))
        self._session = session or requests.Session()
        info = self._get_json("/info")
        try:
            self.model_id = str(info["model_id"])
            self.dimension = int(info["dimension"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ContractViolationError(f"malformed /info response: {info!r}") from exc

    def _get_json(self, path: str) -> dict:
        try:
            resp = self._session.get(self._base + path, timeout=self._timeout)
            resp.raise_for_status()
            return resp.json()
        except requests.RequestException as exc:
            raise TransportError(
                f"embedding service GET {path} failed: {exc}",
                getattr(self, "model_id", None),
            ) from exc

    def _post_embed(self, texts: list[str]) -> list[np.ndarray]:
        payload = {"texts": texts, "pooled": self._pooled}
        try:
            resp = self._session.post(self._base + "/embed", json=payload, timeout=self._timeout)
            resp.raise_for_status()
            body = resp.json()
        except requests.RequestException as exc:
            raise TransportError(f"embedding service POST /embed failed: {exc}", self.model_id) from exc
        try:
            dimension = int(body["dimension"])
            matrices = [np.asarray(m, dtype=np.float64) for m in body["matrices"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise ContractViolationError("malformed /embed response", self.model_id) from exc
        if dimension != self.dimension:
            raise ContractViolationError(
                f"/embed reported dimension {dimension}, /info said {self.dimension}", self.model_id
            )
        if len(matrices) != len(texts):
            raise ContractViolationError(
                f"/embed returned {len(matrices)} matrices for {len(texts)} texts", self.model_id
            )
        return matrices

    def matrices(self, docs: Sequence["PatentDocument"]) -> list[np.ndarray]:
        texts = [document_text(doc) for doc in docs]
        out: list[np.ndarray] = []
        for i in range(0, len(texts), self._batch):
            out.extend(self._post_embed(texts[i : i + self._batch]))
        return out
