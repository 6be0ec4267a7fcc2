"""Binary vector cache: precomputed embedding matrices keyed by patent id.

The format is bit-exact so caches are portable across implementations:

* header: one UTF-8 text line ``PATSIM-VEC v1 <model_id> <d>\\n``
  (exactly four space-separated fields; model ids therefore contain no
  whitespace)
* body: one record per patent, back to back, each laid out as

    ======================  =======================================
    id_len: uint32 LE        byte length of the UTF-8 patent id
    id: id_len bytes         UTF-8 patent id
    n: uint32 LE             number of token vectors (>= 1)
    data: n*d float32 LE     row-major token vectors
    ======================  =======================================

A pre-pooled cache simply stores n=1 records.
"""

from __future__ import annotations

import struct
from pathlib import Path
from typing import IO, Iterable

import numpy as np

from .errors import VectorCacheError

MAGIC = "PATSIM-VEC"
VERSION = "v1"

_U32 = struct.Struct("<I")


def write_cache(
    sink: str | Path | IO[bytes],
    model_id: str,
    dimension: int,
    records: Iterable[tuple[str, np.ndarray]],
) -> int:
    """Write (patent_id, n x d matrix) records; returns the record count.

    Matrices are stored as little-endian float32 regardless of input dtype.
    """
    if isinstance(sink, (str, Path)):
        with open(sink, "wb") as fh:
            return write_cache(fh, model_id, dimension, records)
    if not model_id or any(c.isspace() for c in model_id):
        raise VectorCacheError(f"model_id must be non-empty without whitespace, got {model_id!r}")
    if dimension < 1:
        raise VectorCacheError(f"dimension must be >= 1, got {dimension}")
    sink.write(f"{MAGIC} {VERSION} {model_id} {dimension}\n".encode("utf-8"))
    count = 0
    for patent_id, matrix in records:
        m = np.ascontiguousarray(matrix, dtype="<f4")
        if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] != dimension:
            raise VectorCacheError(
                f"matrix for {patent_id!r} has shape {m.shape}, expected n x {dimension}"
            )
        if not np.all(np.isfinite(m)):
            raise VectorCacheError(f"matrix for {patent_id!r} contains non-finite values")
        id_bytes = patent_id.encode("utf-8")
        sink.write(_U32.pack(len(id_bytes)))
        sink.write(id_bytes)
        sink.write(_U32.pack(m.shape[0]))
        sink.write(m.tobytes())
        count += 1
    return count


def _read_exact(stream: IO[bytes], size: int, what: str) -> bytes:
    data = stream.read(size)
    if len(data) != size:
        raise VectorCacheError(f"truncated cache file: expected {size} bytes of {what}, got {len(data)}")
    return data


class VectorCache:
    """A fully loaded cache file: model metadata plus id-keyed matrices."""

    def __init__(self, model_id: str, dimension: int, matrices: dict[str, np.ndarray]):
        self.model_id = model_id
        self.dimension = dimension
        self._matrices = matrices

    @classmethod
    def load(cls, source: str | Path | IO[bytes]) -> "VectorCache":
        if isinstance(source, (str, Path)):
            with open(source, "rb") as fh:
                return cls.load(fh)
        model_id, dimension = _read_header(source)
        matrices: dict[str, np.ndarray] = {}
        while True:
            prefix = source.read(_U32.size)
            if not prefix:
                break
            if len(prefix) != _U32.size:
                raise VectorCacheError("truncated cache file in record id length")
            (id_len,) = _U32.unpack(prefix)
            patent_id = _read_exact(source, id_len, "patent id").decode("utf-8")
            (n,) = _U32.unpack(_read_exact(source, _U32.size, "token count"))
            if n < 1:
                raise VectorCacheError(f"record {patent_id!r} has n={n}; at least one token vector required")
            data = _read_exact(source, n * dimension * 4, f"vectors of {patent_id!r}")
            if patent_id in matrices:
                raise VectorCacheError(f"duplicate record for {patent_id!r} in cache")
            matrices[patent_id] = np.frombuffer(data, dtype="<f4").reshape(n, dimension)
        return cls(model_id=model_id, dimension=dimension, matrices=matrices)

    def __len__(self) -> int:
        return len(self._matrices)

    def __contains__(self, patent_id: str) -> bool:
        return patent_id in self._matrices

    def ids(self) -> list[str]:
        return list(self._matrices)

    def matrix(self, patent_id: str) -> np.ndarray:
        try:
            return self._matrices[patent_id]
        except KeyError:
            raise VectorCacheError(f"patent {patent_id!r} not present in cache") from None


def _read_header(stream: IO[bytes]) -> tuple[str, int]:
    header = stream.readline()
    try:
        parts = header.decode("utf-8").rstrip("\n").split(" ")
    except UnicodeDecodeError:
        raise VectorCacheError("cache header is not UTF-8 text") from None
    if len(parts) != 4 or parts[0] != MAGIC or parts[1] != VERSION:
        raise VectorCacheError(
            f"bad cache header {header!r}; expected '{MAGIC} {VERSION} <model_id> <d>'"
        )
    model_id = parts[2]
    try:
        dimension = int(parts[3])
    except ValueError:
        raise VectorCacheError(f"bad dimension field {parts[3]!r} in cache header") from None
    if not model_id or dimension < 1:
        raise VectorCacheError(f"bad cache header {header!r}")
    return model_id, dimension
