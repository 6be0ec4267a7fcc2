from __future__ import annotations

import json
from pathlib import Path

import pytest

from patsim.corpus import Corpus, PatentDocument
from patsim.providers import StubProvider


def make_doc(doc_id: str, title: str, abstract: str, ipc: list[str], year: int | None = None) -> PatentDocument:
    return PatentDocument.from_raw(id=doc_id, title=title, abstract=abstract, ipc_raw=ipc, grant_year=year)


@pytest.fixture
def stub_provider() -> StubProvider:
    return StubProvider(seed=7)


@pytest.fixture
def small_corpus() -> Corpus:
    return Corpus(
        [
            make_doc("P1", "Neural text encoder", "Encodes patent abstracts with a transformer.", ["G06F40/30"]),
            make_doc("P2", "Neural text encoder", "Encodes patent abstracts with a transformer.", ["G06F40/30"]),
            make_doc("P3", "Pump impeller", "A centrifugal pump impeller with curved vanes.", ["F04D29/22", "F04D29/24"]),
            make_doc("P4", "Crypto handshake", "Key agreement over an insecure channel.", ["H04L9/08", "G06F21/60"]),
            make_doc("P5", "Soil tilling blade", "A rotary blade for tilling compacted soil.", ["A01B33/10"]),
        ]
    )


def write_corpus_jsonl(path: Path, rows: list[dict]) -> Path:
    with open(path, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row) + "\n")
    return path


def write_pairs_csv(path: Path, header: str, rows: list[str]) -> Path:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(row + "\n")
    return path
