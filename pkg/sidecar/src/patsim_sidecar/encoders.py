"""Encoder backends behind the HTTP surface.

Every backend satisfies the same contract: ``encode(texts, pooled)``
returns one float32 matrix per text (n x d token vectors, or 1 x d when
pooled) plus the post-truncation token counts, deterministically for a
fixed configuration.
"""

from __future__ import annotations

import hashlib
from typing import Protocol

import numpy as np

from .config import SidecarConfig


class Encoder(Protocol):
    model_id: str
    dimension: int
    max_tokens: int

    def encode(self, texts: list[str], pooled: bool) -> tuple[list[np.ndarray], list[int]]: ...


class HashEncoder:
    """Deterministic token vectors from a keyed hash; no model weights.

    Intended for development, CI, and air-gapped deployments: the vector
    for a (token, position) pair is drawn from a PCG64 generator seeded
    by a blake2b digest, so any two service instances with the same
    configuration are bit-identical.
    """

    def __init__(self, dimension: int, max_tokens: int, seed: int = 0):
        self.dimension = dimension
        self.max_tokens = max_tokens
        self.seed = seed
        self.model_id = f"hash-encoder-v1-d{dimension}-s{seed}"
        self._cache: dict[tuple[int, str], np.ndarray] = {}

    def _token_vector(self, position: int, token: str) -> np.ndarray:
        key = (position, token)
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        digest = hashlib.blake2b(f"{self.seed}|{position}|{token}".encode("utf-8"), digest_size=8).digest()
        rng = np.random.default_rng(int.from_bytes(digest, "little"))
        vec = rng.standard_normal(self.dimension).astype(np.float32)
        self._cache[key] = vec
        return vec

    def encode(self, texts: list[str], pooled: bool) -> tuple[list[np.ndarray], list[int]]:
        matrices = []
        counts = []
        for text in texts:
            tokens = text.lower().split()[: self.max_tokens]
            rows = np.vstack([self._token_vector(i, tok) for i, tok in enumerate(tokens)])
            if pooled:
                rows = rows.mean(axis=0, keepdims=True, dtype=np.float64).astype(np.float32)
            matrices.append(rows)
            counts.append(rows.shape[0])
        return matrices, counts


class TransformerEncoder:
    """Sentence-transformer checkpoint pinned by exact revision.

    Loads lazily and only when configured; deployments without model
    weights use the hash backend instead.
    """

    def __init__(self, model_name: str, revision: str, max_tokens: int):
        from sentence_transformers import SentenceTransformer  # deferred heavy import

        self._model = SentenceTransformer(model_name, revision=revision)
        self._model.eval()
        self._model.max_seq_length = min(max_tokens, self._model.max_seq_length or max_tokens)
        self.max_tokens = self._model.max_seq_length
        self.dimension = self._model.get_sentence_embedding_dimension()
        self.model_id = f"{model_name}@{revision[:12]}"

    def encode(self, texts: list[str], pooled: bool) -> tuple[list[np.ndarray], list[int]]:
        if pooled:
            pooled_vecs = self._model.encode(texts, convert_to_numpy=True, normalize_embeddings=False)
            matrices = [vec.reshape(1, -1).astype(np.float32) for vec in pooled_vecs]
            return matrices, [1] * len(texts)
        token_mats = self._model.encode(texts, output_value="token_embeddings", convert_to_numpy=False)
        matrices = [m.detach().cpu().numpy().astype(np.float32) for m in token_mats]
        return matrices, [m.shape[0] for m in matrices]


def build_encoder(config: SidecarConfig) -> Encoder:
    if config.backend == "transformer":
        return TransformerEncoder(config.model_name, config.model_revision, config.max_tokens)
    return HashEncoder(config.dimension, config.max_tokens, config.seed)
