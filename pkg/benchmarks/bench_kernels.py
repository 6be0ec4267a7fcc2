"""Benchmark the JIT kernels against their pure-numpy fallbacks.

Run directly:

    python benchmarks/bench_kernels.py --docs 2000 --pairs 200000 --dim 384

The same comparison holds end to end: set PATSIM_NO_NUMBA=1 to force the
whole package onto the numpy path.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from patsim import kernels


def _time(fn, *args, repeats: int = 3) -> float:
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def build_inputs(docs: int, pairs: int, dim: int, seed: int):
    rng = np.random.default_rng(seed)
    vecs = rng.standard_normal((docs, dim))
    units = vecs / np.linalg.norm(vecs, axis=1, keepdims=True)
    ia = rng.integers(0, docs, size=pairs).astype(np.int64)
    ib = rng.integers(0, docs, size=pairs).astype(np.int64)
    sets = [
        frozenset(f"K{int(k):02d}" for k in rng.choice(40, size=int(rng.integers(1, 7)), replace=False))
        for _ in range(docs)
    ]
    keys, offsets = kernels.encode_key_sets(sets)
    return units, ia, ib, keys, offsets


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--docs", type=int, default=2000)
    parser.add_argument("--pairs", type=int, default=200_000)
    parser.add_argument("--dim", type=int, default=384)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    if kernels.pair_dots_jit is None:
        print("numba is not importable; nothing to compare")
        return 1

    units, ia, ib, keys, offsets = build_inputs(args.docs, args.pairs, args.dim, args.seed)

    cases = [
        ("pair_dots", kernels.pair_dots_jit, kernels.pair_dots_numpy, (units, ia, ib)),
        ("dots_vs_all", kernels.dots_vs_all_jit, kernels.dots_vs_all_numpy, (units, 0)),
        ("jaccard_pairs", kernels.jaccard_pairs_jit, kernels.jaccard_pairs_numpy, (keys, offsets, ia, ib)),
    ]

    print(f"docs={args.docs} pairs={args.pairs} dim={args.dim} (best of 3)")
    print(f"{'kernel':<14} {'numba':>10} {'numpy':>10} {'speedup':>9}")
    for name, jit_fn, np_fn, call_args in cases:
        jit_fn(*call_args)  # compile outside the timed region
        jit_time = _time(jit_fn, *call_args)
        np_time = _time(np_fn, *call_args)
        print(f"{name:<14} {jit_time * 1e3:>8.1f}ms {np_time * 1e3:>8.1f}ms {np_time / jit_time:>8.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
