"""Hybrid patent similarity: semantic distance from text embeddings,
technological distance from IPC code overlap, combined into one score."""

from .corpus import (
    Corpus,
    CorpusStats,
    IngestIssue,
    PatentDocument,
    PatentPair,
    corpus_stats,
    load_corpus,
    load_pairs,
    save_corpus,
)
from .errors import (
    ConstantInputError,
    ContractViolationError,
    DegenerateVectorError,
    DomainError,
    IngestError,
    IpcParseError,
    PatsimError,
    PendingExpertError,
    ProviderError,
    TransportError,
    UnknownPatentError,
    VectorCacheError,
)
from .evaluation import EvalSummary, evaluate, pearson, spearman
from .hybrid import (
    ScoreBatch,
    SimilarityReport,
    all_pairs,
    score_corpus,
    score_pair,
    sdtd,
    topk_neighbors,
)
from .ipc import IpcCode, IpcKey3, normalize_code_set, parse_ipc, truncate3
from .providers import CacheProvider, RemoteProvider, StubProvider
from .ratings import RATING_SCALE, AdjudicatedScore, RatingRecord, adjudicate
from .semantic import (
    EmbeddingMatrix,
    EmbeddingProvider,
    MeanVector,
    cosine,
    embed_document,
    embed_documents,
    mean_pool,
    semantic_distance,
)
from .techdist import TechProfile, jaccard_td
from .veccache import VectorCache, write_cache

__version__ = "0.1.0"

__all__ = [
    "AdjudicatedScore",
    "CacheProvider",
    "ConstantInputError",
    "ContractViolationError",
    "Corpus",
    "CorpusStats",
    "DegenerateVectorError",
    "DomainError",
    "EmbeddingMatrix",
    "EmbeddingProvider",
    "EvalSummary",
    "IngestError",
    "IngestIssue",
    "IpcCode",
    "IpcKey3",
    "IpcParseError",
    "MeanVector",
    "PatentDocument",
    "PatentPair",
    "PatsimError",
    "PendingExpertError",
    "ProviderError",
    "RATING_SCALE",
    "RatingRecord",
    "RemoteProvider",
    "ScoreBatch",
    "SimilarityReport",
    "StubProvider",
    "TechProfile",
    "TransportError",
    "UnknownPatentError",
    "VectorCache",
    "VectorCacheError",
    "adjudicate",
    "all_pairs",
    "corpus_stats",
    "cosine",
    "embed_document",
    "embed_documents",
    "evaluate",
    "jaccard_td",
    "load_corpus",
    "load_pairs",
    "mean_pool",
    "normalize_code_set",
    "parse_ipc",
    "pearson",
    "save_corpus",
    "score_corpus",
    "score_pair",
    "sdtd",
    "semantic_distance",
    "spearman",
    "topk_neighbors",
    "truncate3",
    "write_cache",
]
