"""Seeded generator for synthetic rated patent-pair datasets.

Real expert-rated pair data is private, so benchmarking and end-to-end
tests run on generated data with a known ground truth. For each pair the
generator draws a text-overlap fraction and an IPC-overlap target, then:

* text: both documents share their first ``round(f_text * length)``
  tokens in the same positions (the hash-stub embedder keys vectors on
  (token, position), so position-aligned overlap is what moves its
  cosine), followed by independent filler tokens;
* IPC: key-set sizes are drawn from 1..6 and a shared subset is chosen so
  the realized Jaccard similarity approximates the drawn target;
* truth: a noisy monotone blend of the two overlap signals, quantized
  onto the seven-point rating scale for each of three simulated panelists
  (per-rater jitter) and for the law expert.

Ground truth therefore depends on BOTH signals, which is exactly the
regime where the hybrid score should beat the text-only score.
"""

from __future__ import annotations

import argparse
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .corpus import Corpus, PatentDocument, PatentPair, save_corpus
from .ipc import SECTIONS
from .ratings import RatingRecord

RATING_VALUES = np.array([0, 1, 3, 5, 7, 9, 10])


@dataclass(frozen=True)
class SynthConfig:
    pairs: int = 200
    seed: int = 0
    vocab_size: int = 400
    title_tokens: int = 6
    abstract_tokens: int = 40
    key_universe: int = 40
    text_weight: float = 0.5
    ipc_weight: float = 0.5
    truth_noise: float = 0.05
    rater_noise: float = 0.06


@dataclass
class SynthDataset:
    corpus: Corpus
    pairs: list[PatentPair]
    truth: list[float] = field(default_factory=list)


def _key_universe(size: int) -> list[str]:
    keys = []
    i = 0
    while len(keys) < size:
        key = f"{SECTIONS[i % 8]}{(i * 7 + 1) % 100:02d}{chr(ord('A') + (i * 3) % 26)}"
        if key not in keys:
            keys.append(key)
        i += 1
    return keys


def _raw_codes(rng: np.random.Generator, keys: list[str]) -> list[str]:
    # Dress 3-depth keys up as full codes; duplicates of a key at different
    # groups exercise the deduplicating normalization downstream.
    raws = []
    for key in keys:
        for _ in range(int(rng.integers(1, 3))):
            raws.append(f"{key}{int(rng.integers(1, 100))}/{int(rng.integers(0, 100)):02d}")
    return raws


def _quantize(value: float) -> int:
    return int(RATING_VALUES[np.argmin(np.abs(RATING_VALUES - 10.0 * value))])


def generate(config: SynthConfig = SynthConfig()) -> SynthDataset:
    """Build a corpus of 2*pairs documents and their rated pairs."""
    rng = np.random.default_rng(config.seed)
    vocab = [f"term{i:03d}" for i in range(config.vocab_size)]
    universe = _key_universe(config.key_universe)
    length = config.title_tokens + config.abstract_tokens

    documents: list[PatentDocument] = []
    pairs: list[PatentPair] = []
    truth: list[float] = []

    def make_doc(doc_id: str, tokens: list[str], keys: list[str]) -> PatentDocument:
        title = " ".join(tokens[: config.title_tokens])
        abstract = " ".join(tokens[config.title_tokens :])
        return PatentDocument.from_raw(
            id=doc_id,
            title=title,
            abstract=abstract,
            ipc_raw=_raw_codes(rng, keys),
            grant_year=int(rng.integers(2019, 2021)),
        )

    for p in range(config.pairs):
        f_text = float(rng.uniform())
        shared_len = int(round(f_text * length))
        shared = list(rng.choice(vocab, size=shared_len))
        tokens_a = shared + list(rng.choice(vocab, size=length - shared_len))
        tokens_b = shared + list(rng.choice(vocab, size=length - shared_len))

        n_a = int(rng.integers(1, 7))
        n_b = int(rng.integers(1, 7))
        f_ipc = float(rng.uniform())
        n_shared = int(round(f_ipc * min(n_a, n_b)))
        drawn = list(rng.choice(len(universe), size=n_a + n_b - n_shared, replace=False))
        keys_shared = [universe[i] for i in drawn[:n_shared]]
        keys_a = keys_shared + [universe[i] for i in drawn[n_shared : n_a]]
        keys_b = keys_shared + [universe[i] for i in drawn[n_a : n_a + n_b - n_shared]]
        jaccard = n_shared / (n_a + n_b - n_shared)

        doc_a = make_doc(f"SYN{p:04d}A", tokens_a, keys_a)
        doc_b = make_doc(f"SYN{p:04d}B", tokens_b, keys_b)
        documents.extend([doc_a, doc_b])

        t = config.text_weight * (shared_len / length) + config.ipc_weight * jaccard
        t = float(np.clip(t + rng.normal(0.0, config.truth_noise), 0.0, 1.0))
        truth.append(t)

        panel = [
            _quantize(float(np.clip(t + rng.normal(0.0, config.rater_noise), 0.0, 1.0)))
            for _ in range(3)
        ]
        rating = RatingRecord(panel[0], panel[1], panel[2], expert=_quantize(t))
        pairs.append(PatentPair(id_a=doc_a.id, id_b=doc_b.id, rating=rating))

    return SynthDataset(corpus=Corpus(documents), pairs=pairs, truth=truth)


def write_dataset(out_dir: str | Path, config: SynthConfig = SynthConfig()) -> tuple[Path, Path]:
    """Generate and write corpus.jsonl + pairs.csv; returns both paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    dataset = generate(config)
    corpus_path = out / "corpus.jsonl"
    pairs_path = out / "pairs.csv"
    save_corpus(dataset.corpus, corpus_path)
    with open(pairs_path, "w", encoding="utf-8") as fh:
        fh.write("id_a,id_b,r1,r2,r3,expert\n")
        for pair in dataset.pairs:
            r = pair.rating
            fh.write(f"{pair.id_a},{pair.id_b},{r.r1},{r.r2},{r.r3},{r.expert}\n")
    return corpus_path, pairs_path


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description="generate a synthetic rated patent-pair dataset")
    parser.add_argument("--out", required=True, help="output directory")
    parser.add_argument("--pairs", type=int, default=200)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)
    corpus_path, pairs_path = write_dataset(args.out, SynthConfig(pairs=args.pairs, seed=args.seed))
    print(f"wrote {corpus_path} and {pairs_path}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
