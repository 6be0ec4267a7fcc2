from __future__ import annotations

import io
import math

import numpy as np
import pytest

from conftest import make_doc, write_corpus_jsonl, write_pairs_csv
from patsim.corpus import Corpus, PatentPair, corpus_stats, load_corpus, load_pairs, save_corpus
from patsim.errors import DomainError, IngestError, UnknownPatentError
from patsim.ratings import RatingRecord

GOOD_ROWS = [
    {"id": "P1", "title": "Widget", "abstract": "A widget.", "ipc": ["G06F40/30"], "grant_year": 2019},
    {"id": "P2", "title": "Gadget", "abstract": "A gadget.", "ipc": ["H04L9/06", "G06F40/40"]},
    {"id": "P3", "title": "Sprocket", "abstract": "A sprocket.", "ipc": ["A01B33/10"]},
]


class TestLoadCorpus:
    def test_well_formed_lines(self, tmp_path):
        path = write_corpus_jsonl(tmp_path / "c.jsonl", GOOD_ROWS)
        loaded = load_corpus(path)
        assert len(loaded.corpus) == 3
        assert loaded.issues == []
        assert loaded.corpus.lookup("P2").grant_year is None

    def test_empty_ipc_list_rejected(self, tmp_path):
        rows = GOOD_ROWS[:2] + [{"id": "P9", "title": "T", "abstract": "A", "ipc": []}]
        loaded = load_corpus(write_corpus_jsonl(tmp_path / "c.jsonl", rows))
        assert len(loaded.corpus) == 2
        assert len(loaded.issues) == 1
        assert loaded.issues[0].line == 3

    def test_duplicate_id_names_both_lines(self, tmp_path):
        rows = [GOOD_ROWS[0], GOOD_ROWS[1], dict(GOOD_ROWS[0], title="Copy")]
        loaded = load_corpus(write_corpus_jsonl(tmp_path / "c.jsonl", rows))
        assert len(loaded.corpus) == 2
        (issue,) = loaded.issues
        assert issue.line == 3 and "line 1" in issue.message and "P1" in issue.message

    def test_malformed_json(self, tmp_path):
        path = tmp_path / "c.jsonl"
        path.write_text('{"id": "P1", "title": "T"\n', encoding="utf-8")
        loaded = load_corpus(path)
        assert len(loaded.corpus) == 0
        assert "malformed JSON" in loaded.issues[0].message

    def test_missing_fields_reported_together(self, tmp_path):
        loaded = load_corpus(write_corpus_jsonl(tmp_path / "c.jsonl", [{"id": "P1"}]))
        message = loaded.issues[0].message
        assert "title" in message and "abstract" in message and "ipc" in message

    def test_blank_title_rejected(self, tmp_path):
        rows = [dict(GOOD_ROWS[0], title="   ")]
        loaded = load_corpus(write_corpus_jsonl(tmp_path / "c.jsonl", rows))
        assert len(loaded.corpus) == 0 and len(loaded.issues) == 1

    def test_unparseable_ipc_rejects_document(self, tmp_path):
        rows = [dict(GOOD_ROWS[0], ipc=["NOT-A-CODE"])]
        loaded = load_corpus(write_corpus_jsonl(tmp_path / "c.jsonl", rows))
        assert len(loaded.corpus) == 0
        assert "NOT-A-CODE" in loaded.issues[0].message

    def test_strict_mode_raises(self, tmp_path):
        rows = GOOD_ROWS + [{"id": "P9", "title": "T", "abstract": "A", "ipc": []}]
        with pytest.raises(IngestError) as exc:
            load_corpus(write_corpus_jsonl(tmp_path / "c.jsonl", rows), strict=True)
        assert len(exc.value.issues) == 1

    def test_blank_lines_skipped(self, tmp_path):
        path = tmp_path / "c.jsonl"
        body = "\n".join(
            ['{"id": "P1", "title": "T", "abstract": "A", "ipc": ["G06F"]}', "", ""]
        )
        path.write_text(body + "\n", encoding="utf-8")
        loaded = load_corpus(path)
        assert len(loaded.corpus) == 1 and not loaded.issues

    def test_every_document_has_keys(self, tmp_path):
        loaded = load_corpus(write_corpus_jsonl(tmp_path / "c.jsonl", GOOD_ROWS))
        assert all(len(doc.ipc_keys) >= 1 for doc in loaded.corpus)


def test_save_load_roundtrip(tmp_path):
    first = load_corpus(write_corpus_jsonl(tmp_path / "a.jsonl", GOOD_ROWS)).corpus
    save_corpus(first, tmp_path / "b.jsonl")
    second = load_corpus(tmp_path / "b.jsonl")
    assert second.issues == []
    assert list(second.corpus) == list(first)


def test_load_corpus_from_stream():
    text = '{"id": "P1", "title": "T", "abstract": "A", "ipc": ["G06F"]}\n'
    loaded = load_corpus(io.StringIO(text))
    assert len(loaded.corpus) == 1


class TestCorpusContainer:
    def test_lookup_unknown_raises(self, small_corpus):
        with pytest.raises(UnknownPatentError):
            small_corpus.lookup("NOPE")

    def test_duplicate_ids_rejected(self):
        doc = make_doc("P1", "T", "A", ["G06F"])
        with pytest.raises(DomainError):
            Corpus([doc, doc])

    def test_iteration_order_is_insertion_order(self, small_corpus):
        assert [d.id for d in small_corpus] == ["P1", "P2", "P3", "P4", "P5"]


class TestPatentPair:
    def test_self_pair_rejected(self):
        with pytest.raises(DomainError):
            PatentPair("P1", "P1")


class TestLoadPairs:
    @pytest.fixture
    def corpus(self, small_corpus):
        return small_corpus

    def test_rated_row(self, tmp_path, corpus):
        path = write_pairs_csv(tmp_path / "p.csv", "id_a,id_b,r1,r2,r3", ["P1,P2,5,5,5"])
        loaded = load_pairs(path, corpus)
        assert loaded.issues == []
        assert loaded.pairs == [PatentPair("P1", "P2", RatingRecord(5, 5, 5))]

    def test_unrated_rows(self, tmp_path, corpus):
        path = write_pairs_csv(tmp_path / "p.csv", "id_a,id_b", ["P1,P2", "P3,P4"])
        loaded = load_pairs(path, corpus)
        assert [p.rating for p in loaded.pairs] == [None, None]

    def test_expert_column(self, tmp_path, corpus):
        path = write_pairs_csv(
            tmp_path / "p.csv", "id_a,id_b,r1,r2,r3,expert", ["P1,P2,0,0,9,3", "P3,P4,5,5,5,"]
        )
        loaded = load_pairs(path, corpus)
        assert loaded.pairs[0].rating.expert == 3
        assert loaded.pairs[1].rating.expert is None

    def test_self_pair_row_error(self, tmp_path, corpus):
        path = write_pairs_csv(tmp_path / "p.csv", "id_a,id_b", ["P1,P1"])
        loaded = load_pairs(path, corpus)
        assert loaded.pairs == []
        assert loaded.issues[0].line == 2

    def test_unresolved_id_row_error(self, tmp_path, corpus):
        path = write_pairs_csv(tmp_path / "p.csv", "id_a,id_b", ["P1,PX"])
        loaded = load_pairs(path, corpus)
        assert "PX" in loaded.issues[0].message

    def test_off_scale_rating_row_error(self, tmp_path, corpus):
        path = write_pairs_csv(tmp_path / "p.csv", "id_a,id_b,r1,r2,r3", ["P1,P2,5,6,5"])
        loaded = load_pairs(path, corpus)
        assert loaded.pairs == [] and len(loaded.issues) == 1

    def test_partial_rating_block_is_error(self, tmp_path, corpus):
        path = write_pairs_csv(tmp_path / "p.csv", "id_a,id_b,r1,r2,r3", ["P1,P2,5,,5"])
        loaded = load_pairs(path, corpus)
        assert loaded.pairs == [] and "together" in loaded.issues[0].message

    def test_bad_header_rejected(self, tmp_path, corpus):
        path = write_pairs_csv(tmp_path / "p.csv", "left,right", ["P1,P2"])
        with pytest.raises(DomainError):
            load_pairs(path, corpus)

    def test_strict_mode_raises(self, tmp_path, corpus):
        path = write_pairs_csv(tmp_path / "p.csv", "id_a,id_b", ["P1,PX"])
        with pytest.raises(IngestError):
            load_pairs(path, corpus, strict=True)

    def test_good_rows_survive_bad_neighbors(self, tmp_path, corpus):
        path = write_pairs_csv(tmp_path / "p.csv", "id_a,id_b", ["P1,P2", "P1,P1", "P3,P4"])
        loaded = load_pairs(path, corpus)
        assert [(p.id_a, p.id_b) for p in loaded.pairs] == [("P1", "P2"), ("P3", "P4")]
        assert len(loaded.issues) == 1


def _corpus_with_key_counts(counts: list[int]) -> Corpus:
    # Distinct subclasses make the key count equal len(ipc) exactly.
    subclasses = "ABCDEFGHIJ"
    docs = []
    for i, count in enumerate(counts):
        ipc = [f"G06{subclasses[j]}" for j in range(count)]
        docs.append(make_doc(f"D{i}", "T", "A", ipc))
    return Corpus(docs)


class TestCorpusStats:
    def test_all_single_key(self):
        stats = corpus_stats(_corpus_with_key_counts([1, 1, 1]))
        assert stats.mean_keys == 1.0
        assert stats.sd_keys == 0.0

    def test_hand_computed_values(self):
        stats = corpus_stats(_corpus_with_key_counts([1, 2, 3]))
        assert stats.mean_keys == pytest.approx(2.0, abs=1e-12)
        assert stats.sd_keys == pytest.approx(math.sqrt(2 / 3), abs=1e-12)

    def test_histogram(self):
        stats = corpus_stats(_corpus_with_key_counts([1, 1, 2, 2]))
        assert stats.histogram == {1: 2, 2: 2}

    def test_empty_corpus(self):
        with pytest.raises(DomainError):
            corpus_stats(Corpus([]))

    def test_mean_matches_naive_summation_oracle(self):
        rng = np.random.default_rng(42)
        for _ in range(20):
            counts = [int(c) for c in rng.integers(1, 7, size=int(rng.integers(1, 40)))]
            stats = corpus_stats(_corpus_with_key_counts(counts))
            total = 0
            for c in counts:
                total += c
            assert abs(stats.mean_keys - total / len(counts)) <= 1e-12

    def test_dedup_feeds_stats(self):
        # Three raw codes in one subclass count as a single key.
        corpus = Corpus([make_doc("D0", "T", "A", ["G06F40/30", "G06F40/40", "G06F40/56"])])
        stats = corpus_stats(corpus)
        assert stats.mean_keys == 1.0
        assert stats.histogram == {1: 1}
