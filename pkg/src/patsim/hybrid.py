"""Hybrid similarity: combine semantic and technological distance.

The hybrid score weights semantic distance by technological overlap:
``(td + 1) * sd / 2``. The +1 keeps a pair with zero IPC overlap from
being wiped out entirely, and the /2 renormalizes into [0, 1]. Two
consequences worth knowing: sdtd <= sd always (equality only at td = 1),
and sd = 0 forces sdtd = 0 no matter the IPC overlap.

Batch entry points (score_corpus, topk_neighbors) funnel the numeric work
through the kernels module; score_pair is the scalar reference path.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import kernels
from .corpus import Corpus, PatentPair
from .errors import DomainError, PatsimError, TransportError, UnknownPatentError
from .semantic import EmbeddingProvider, embed_documents, mean_pool, semantic_distance
from .techdist import TechProfile, jaccard_td

SDTD_CONSISTENCY_TOL = 1e-12


@dataclass(frozen=True)
class SimilarityReport:
    """Scores for one patent pair: semantic, technological, and hybrid."""

    id_a: str
    id_b: str
    sd: float
    td: float
    sdtd: float
    model_id: str

    def __post_init__(self):
        for name in ("sd", "td", "sdtd"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise DomainError(f"{name} must be in [0, 1], got {value}")
        if abs(self.sdtd - (self.td + 1.0) * self.sd / 2.0) > SDTD_CONSISTENCY_TOL:
            raise DomainError(
                f"inconsistent report: sdtd={self.sdtd} but (td+1)*sd/2={(self.td + 1.0) * self.sd / 2.0}"
            )


def sdtd(sd: float, td: float) -> float:
    """Hybrid score (td + 1) * sd / 2 for inputs in [0, 1]."""
    if not 0.0 <= sd <= 1.0:
        raise DomainError(f"sd must be in [0, 1], got {sd}")
    if not 0.0 <= td <= 1.0:
        raise DomainError(f"td must be in [0, 1], got {td}")
    return (td + 1.0) * sd / 2.0


def score_pair(corpus: Corpus, provider: EmbeddingProvider, id_a: str, id_b: str) -> SimilarityReport:
    """Score a single pair through the scalar operations."""
    if id_a == id_b:
        raise DomainError(f"cannot score a patent against itself: {id_a!r}")
    doc_a, doc_b = corpus.lookup(id_a), corpus.lookup(id_b)
    mat_a, mat_b = embed_documents(provider, [doc_a, doc_b])
    sd = semantic_distance(mean_pool(mat_a), mean_pool(mat_b))
    td = jaccard_td(TechProfile.from_document(doc_a), TechProfile.from_document(doc_b))
    return SimilarityReport(id_a=id_a, id_b=id_b, sd=sd, td=td, sdtd=sdtd(sd, td), model_id=provider.model_id)


@dataclass(frozen=True)
class PairIssue:
    """One pair that could not be scored, with its position in the input."""

    index: int
    id_a: str
    id_b: str
    message: str

    def __str__(self) -> str:
        return f"pair #{self.index} ({self.id_a}, {self.id_b}): {self.message}"


@dataclass
class ScoreBatch:
    """Reports for the scorable pairs (input order) plus per-pair issues."""

    reports: list[SimilarityReport]
    issues: list[PairIssue] = field(default_factory=list)


def _pair_ids(pair: PatentPair | tuple[str, str]) -> tuple[str, str]:
    if isinstance(pair, PatentPair):
        return pair.id_a, pair.id_b
    return pair[0], pair[1]


class _VectorTable:
    """Unit-norm mean vectors and encoded key sets for a set of documents."""

    def __init__(self, corpus: Corpus, provider: EmbeddingProvider, ids: list[str], jobs: int, strict: bool):
        self.index: dict[str, int] = {}
        self.errors: dict[str, str] = {}
        docs = [corpus.lookup(i) for i in ids]
        matrices = {}
        try:
            for doc, matrix in zip(docs, embed_documents(provider, docs, jobs=jobs)):
                matrices[doc.id] = matrix
        except TransportError:
            raise
        except PatsimError:
            if strict:
                raise
            # Isolate the failing documents; cheap for cache/stub providers.
            for doc in docs:
                try:
                    matrices[doc.id] = embed_documents(provider, [doc])[0]
                except TransportError:
                    raise
                except PatsimError as exc:
                    self.errors[doc.id] = str(exc)
        pooled = []
        for doc in docs:
            matrix = matrices.get(doc.id)
            if matrix is None:
                continue
            v = mean_pool(matrix).v
            norm = float(np.linalg.norm(v))
            if norm == 0.0:
                message = f"zero mean vector for {doc.id}; cosine undefined"
                if strict:
                    raise DomainError(message)
                self.errors[doc.id] = message
                continue
            self.index[doc.id] = len(pooled)
            pooled.append(v / norm)
        self.units = np.ascontiguousarray(pooled) if pooled else np.empty((0, provider.dimension))
        keyed = [corpus.lookup(i).ipc_keys for i in ids if i in self.index]
        self.keys, self.offsets = kernels.encode_key_sets(keyed)


def score_corpus(
    corpus: Corpus,
    provider: EmbeddingProvider,
    pairs: Sequence[PatentPair | tuple[str, str]],
    strict: bool = False,
    jobs: int = 1,
) -> ScoreBatch:
    """Score many pairs in one batch.

    Each distinct patent id is embedded and pooled once, however many
    pairs it appears in. Unscorable pairs become PairIssues instead of
    aborting the batch, unless ``strict`` is set, in which case the first
    underlying error is raised.
    """
    wanted: list[tuple[int, str, str]] = []
    issues: list[PairIssue] = []
    seen: dict[str, None] = {}
    for idx, pair in enumerate(pairs):
        id_a, id_b = _pair_ids(pair)
        problem: PatsimError | None = None
        if id_a == id_b:
            problem = DomainError("pair references the same patent twice")
        elif id_a not in corpus:
            problem = UnknownPatentError(id_a)
        elif id_b not in corpus:
            problem = UnknownPatentError(id_b)
        if problem is not None:
            if strict:
                raise problem
            issues.append(PairIssue(idx, id_a, id_b, str(problem)))
            continue
        wanted.append((idx, id_a, id_b))
        seen.setdefault(id_a)
        seen.setdefault(id_b)

    table = _VectorTable(corpus, provider, list(seen), jobs=jobs, strict=strict)

    scorable: list[tuple[int, str, str]] = []
    for idx, id_a, id_b in wanted:
        bad = next((i for i in (id_a, id_b) if i in table.errors), None)
        if bad is not None:
            issues.append(PairIssue(idx, id_a, id_b, table.errors[bad]))
        else:
            scorable.append((idx, id_a, id_b))

    reports: list[SimilarityReport] = []
    if scorable:
        ia = np.fromiter((table.index[a] for _, a, _ in scorable), dtype=np.int64, count=len(scorable))
        ib = np.fromiter((table.index[b] for _, _, b in scorable), dtype=np.int64, count=len(scorable))
        cos = np.clip(kernels.pair_dots(table.units, ia, ib), -1.0, 1.0)
        sd = (cos + 1.0) / 2.0
        td = kernels.jaccard_pairs(table.keys, table.offsets, ia, ib)
        hybrid = (td + 1.0) * sd / 2.0
        for p, (idx, id_a, id_b) in enumerate(scorable):
            reports.append(
                SimilarityReport(
                    id_a=id_a,
                    id_b=id_b,
                    sd=float(sd[p]),
                    td=float(td[p]),
                    sdtd=float(hybrid[p]),
                    model_id=provider.model_id,
                )
            )
    issues.sort(key=lambda i: i.index)
    return ScoreBatch(reports=reports, issues=issues)


def all_pairs(corpus: Corpus) -> list[tuple[str, str]]:
    """Every unordered pair of distinct documents, in corpus order."""
    ids = corpus.ids()
    return [(ids[i], ids[j]) for i in range(len(ids)) for j in range(i + 1, len(ids))]


def topk_neighbors(
    corpus: Corpus, provider: EmbeddingProvider, query_id: str, k: int, jobs: int = 1
) -> list[SimilarityReport]:
    """The k most similar patents to the query by hybrid score, descending.

    Ties break by ascending neighbor id so rankings are reproducible. A k
    beyond corpus size simply returns every other document, ranked.
    """
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    query = corpus.lookup(query_id)
    others = [doc.id for doc in corpus if doc.id != query_id]
    if not others:
        return []
    table = _VectorTable(corpus, provider, [query.id] + others, jobs=jobs, strict=True)
    cos = np.clip(kernels.dots_vs_all(table.units, table.index[query_id]), -1.0, 1.0)
    sd = (cos + 1.0) / 2.0
    q = np.full(len(table.index), table.index[query_id], dtype=np.int64)
    everyone = np.arange(len(table.index), dtype=np.int64)
    td = kernels.jaccard_pairs(table.keys, table.offsets, q, everyone)
    hybrid = (td + 1.0) * sd / 2.0
    ranked = sorted(others, key=lambda i: (-hybrid[table.index[i]], i))
    reports = []
    for neighbor in ranked[:k]:
        row = table.index[neighbor]
        reports.append(
            SimilarityReport(
                id_a=query_id,
                id_b=neighbor,
                sd=float(sd[row]),
                td=float(td[row]),
                sdtd=float(hybrid[row]),
                model_id=provider.model_id,
            )
        )
    return reports
