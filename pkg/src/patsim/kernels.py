"""Hot numeric kernels for batch pair scoring.

Each kernel exists twice: a JIT-compiled version and a pure-numpy
fallback. The JIT path is used when numba imports cleanly and the
``PATSIM_NO_NUMBA`` environment variable is unset (checked once at import
time); ``benchmarks/bench_kernels.py`` compares the two.

Inputs are prepared by the callers: mean vectors are already unit-norm
(so dot products are cosines), and IPC key sets are encoded as sorted
int32 id arrays packed CSR-style (``keys``/``offsets``). Keeping the
kernels dumb keeps both backends trivially equivalent.
"""

from __future__ import annotations

import os

import numpy as np

NUMBA_DISABLE_ENV = "PATSIM_NO_NUMBA"


def pair_dots_numpy(units: np.ndarray, idx_a: np.ndarray, idx_b: np.ndarray) -> np.ndarray:
    """Row-wise dot products units[idx_a[p]] . units[idx_b[p]]."""
    return np.einsum("ij,ij->i", units[idx_a], units[idx_b])


def dots_vs_all_numpy(units: np.ndarray, query: int) -> np.ndarray:
    """Dot product of every row against row ``query``."""
    return units @ units[query]


def jaccard_pairs_numpy(
    keys: np.ndarray, offsets: np.ndarray, idx_a: np.ndarray, idx_b: np.ndarray
) -> np.ndarray:
    """Jaccard similarity per pair over CSR-packed sorted key-id rows."""
    out = np.empty(idx_a.shape[0])
    for p in range(idx_a.shape[0]):
        a, b = idx_a[p], idx_b[p]
        row_a = keys[offsets[a] : offsets[a + 1]]
        row_b = keys[offsets[b] : offsets[b + 1]]
        inter = np.intersect1d(row_a, row_b, assume_unique=True).size
        out[p] = inter / (row_a.size + row_b.size - inter)
    return out


def _pair_dots(units, idx_a, idx_b):
    m = idx_a.shape[0]
    d = units.shape[1]
    out = np.empty(m)
    for p in range(m):
        a = idx_a[p]
        b = idx_b[p]
        s = 0.0
        for j in range(d):
            s += units[a, j] * units[b, j]
        out[p] = s
    return out


def _dots_vs_all(units, query):
    n = units.shape[0]
    d = units.shape[1]
    out = np.empty(n)
    for i in range(n):
        s = 0.0
        for j in range(d):
            s += units[i, j] * units[query, j]
        out[i] = s
    return out


def _jaccard_pairs(keys, offsets, idx_a, idx_b):
    m = idx_a.shape[0]
    out = np.empty(m)
    for p in range(m):
        a0, a1 = offsets[idx_a[p]], offsets[idx_a[p] + 1]
        b0, b1 = offsets[idx_b[p]], offsets[idx_b[p] + 1]
        inter = 0
        i, j = a0, b0
        while i < a1 and j < b1:  # sorted-merge intersection count
            ka, kb = keys[i], keys[j]
            if ka == kb:
                inter += 1
                i += 1
                j += 1
            elif ka < kb:
                i += 1
            else:
                j += 1
        union = (a1 - a0) + (b1 - b0) - inter
        out[p] = inter / union
    return out


def _env_disabled() -> bool:
    return os.environ.get(NUMBA_DISABLE_ENV, "").strip().lower() in ("1", "true", "yes", "on")


pair_dots_jit = None
dots_vs_all_jit = None
jaccard_pairs_jit = None

try:
    from numba import njit

    pair_dots_jit = njit(cache=True)(_pair_dots)
    dots_vs_all_jit = njit(cache=True)(_dots_vs_all)
    jaccard_pairs_jit = njit(cache=True)(_jaccard_pairs)
    _NUMBA_IMPORTED = True
except ImportError:  # pragma: no cover - exercised via the env-flag fallback
    _NUMBA_IMPORTED = False

USING_NUMBA = _NUMBA_IMPORTED and not _env_disabled()

if USING_NUMBA:
    BACKEND = "numba"
    pair_dots = pair_dots_jit
    dots_vs_all = dots_vs_all_jit
    jaccard_pairs = jaccard_pairs_jit
else:
    BACKEND = "numpy"
    pair_dots = pair_dots_numpy
    dots_vs_all = dots_vs_all_numpy
    jaccard_pairs = jaccard_pairs_numpy


def encode_key_sets(key_sets: list[frozenset]) -> tuple[np.ndarray, np.ndarray]:
    """Pack key sets into CSR arrays of sorted int32 ids.

    Keys are mapped to ids by sorted string order over the union of all
    sets, so the encoding is deterministic for a given input collection.
    """
    universe = sorted({str(k) for s in key_sets for k in s})
    key_id = {k: i for i, k in enumerate(universe)}
    offsets = np.zeros(len(key_sets) + 1, dtype=np.int64)
    rows = []
    for i, s in enumerate(key_sets):
        ids = np.sort(np.fromiter((key_id[str(k)] for k in s), dtype=np.int32, count=len(s)))
        rows.append(ids)
        offsets[i + 1] = offsets[i] + len(ids)
    keys = np.concatenate(rows) if rows else np.empty(0, dtype=np.int32)
    return keys, offsets
