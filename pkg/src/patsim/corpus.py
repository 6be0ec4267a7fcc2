"""Patent corpus ingest, persistence, and descriptive statistics.

The canonical corpus format is JSONL, one document per line:

    {"id": "...", "title": "...", "abstract": "...", "ipc": ["G06F40/30"], "grant_year": 2019}

``grant_year`` is optional. Rated pairs travel as CSV with header
``id_a,id_b,r1,r2,r3,expert``; the three rating columns are optional as a
block and ``expert`` may be empty per row.

Ingest is fail-soft: bad lines become IngestIssue records and good lines
are kept, unless ``strict=True`` promotes any issue to IngestError. Real
patent dumps are dirty; silently dropping or silently aborting are both
worse than reporting.
"""

from __future__ import annotations

import csv
import json
import statistics
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable, Iterator

from .errors import DomainError, IngestError, IpcParseError, UnknownPatentError
from .ipc import IpcKey3, normalize_code_set
from .ratings import RatingRecord

REQUIRED_FIELDS = ("id", "title", "abstract", "ipc")
PAIR_COLUMNS = ("id_a", "id_b", "r1", "r2", "r3", "expert")


@dataclass(frozen=True)
class PatentDocument:
    """One patent: the text fed to the embedder plus its IPC profile."""

    id: str
    title: str
    abstract: str
    ipc_raw: tuple[str, ...]
    ipc_keys: frozenset[IpcKey3]
    grant_year: int | None = None

    @classmethod
    def from_raw(
        cls,
        id: str,
        title: str,
        abstract: str,
        ipc_raw: Iterable[str],
        grant_year: int | None = None,
    ) -> "PatentDocument":
        """Validate fields and normalize IPC codes into 3-depth keys."""
        if not id or not id.strip():
            raise DomainError("patent id must be non-empty")
        if not title or not title.strip():
            raise DomainError(f"patent {id}: title must be non-empty")
        if not abstract or not abstract.strip():
            raise DomainError(f"patent {id}: abstract must be non-empty")
        raw = tuple(ipc_raw)
        if not raw:
            raise DomainError(f"patent {id}: at least one IPC code is required")
        keys = normalize_code_set(raw)
        return cls(id=id, title=title, abstract=abstract, ipc_raw=raw, ipc_keys=keys, grant_year=grant_year)


@dataclass(frozen=True)
class PatentPair:
    """Two distinct patent ids, optionally carrying a panel rating."""

    id_a: str
    id_b: str
    rating: RatingRecord | None = None

    def __post_init__(self):
        if self.id_a == self.id_b:
            raise DomainError(f"pair must reference two distinct patents, got {self.id_a!r} twice")


class Corpus:
    """Immutable id-keyed collection of patent documents.

    Built once by the loader and safe for concurrent readers afterwards.
    Iteration preserves insertion order.
    """

    def __init__(self, documents: Iterable[PatentDocument]):
        self._docs: dict[str, PatentDocument] = {}
        for doc in documents:
            if doc.id in self._docs:
                raise DomainError(f"duplicate patent id {doc.id!r}")
            self._docs[doc.id] = doc

    def __len__(self) -> int:
        return len(self._docs)

    def __contains__(self, patent_id: str) -> bool:
        return patent_id in self._docs

    def __iter__(self) -> Iterator[PatentDocument]:
        return iter(self._docs.values())

    def ids(self) -> list[str]:
        return list(self._docs)

    def lookup(self, patent_id: str) -> PatentDocument:
        try:
            return self._docs[patent_id]
        except KeyError:
            raise UnknownPatentError(patent_id) from None


@dataclass(frozen=True)
class IngestIssue:
    """One rejected line or row, with its 1-based location in the source."""

    line: int
    message: str

    def __str__(self) -> str:
        return f"line {self.line}: {self.message}"


@dataclass
class CorpusLoad:
    corpus: Corpus
    issues: list[IngestIssue] = field(default_factory=list)


@dataclass
class PairsLoad:
    pairs: list[PatentPair]
    issues: list[IngestIssue] = field(default_factory=list)


def _open_text(source: str | Path | IO[str]) -> tuple[IO[str], bool]:
    if isinstance(source, (str, Path)):
        return open(source, "r", encoding="utf-8"), True
    return source, False


def load_corpus(source: str | Path | IO[str], strict: bool = False) -> CorpusLoad:
    """Read a JSONL document stream into a Corpus.

    Returns the corpus of accepted documents together with per-line
    issues; with ``strict=True`` any issue raises IngestError instead.
    """
    stream, owned = _open_text(source)
    docs: dict[str, tuple[int, PatentDocument]] = {}
    issues: list[IngestIssue] = []
    try:
        for line_no, line in enumerate(stream, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                issues.append(IngestIssue(line_no, f"malformed JSON: {exc.msg}"))
                continue
            if not isinstance(obj, dict):
                issues.append(IngestIssue(line_no, "line is not a JSON object"))
                continue
            missing = [f for f in REQUIRED_FIELDS if f not in obj]
            if missing:
                issues.append(IngestIssue(line_no, f"missing required field(s): {', '.join(missing)}"))
                continue
            ipc = obj["ipc"]
            if not isinstance(ipc, list) or not all(isinstance(c, str) for c in ipc):
                issues.append(IngestIssue(line_no, "field 'ipc' must be a list of strings"))
                continue
            year = obj.get("grant_year")
            if year is not None and not isinstance(year, int):
                issues.append(IngestIssue(line_no, "field 'grant_year' must be an integer"))
                continue
            try:
                doc = PatentDocument.from_raw(
                    id=str(obj["id"]),
                    title=str(obj["title"]),
                    abstract=str(obj["abstract"]),
                    ipc_raw=ipc,
                    grant_year=year,
                )
            except (DomainError, IpcParseError) as exc:
                issues.append(IngestIssue(line_no, str(exc)))
                continue
            if doc.id in docs:
                first_line = docs[doc.id][0]
                issues.append(IngestIssue(line_no, f"duplicate id {doc.id!r}, first seen on line {first_line}"))
                continue
            docs[doc.id] = (line_no, doc)
    finally:
        if owned:
            stream.close()
    if strict and issues:
        raise IngestError(issues)
    return CorpusLoad(Corpus(doc for _, doc in docs.values()), issues)


def save_corpus(corpus: Corpus, sink: str | Path | IO[str]) -> None:
    """Write the corpus back out as canonical JSONL (round-trips load_corpus)."""
    if isinstance(sink, (str, Path)):
        with open(sink, "w", encoding="utf-8") as fh:
            save_corpus(corpus, fh)
        return
    for doc in corpus:
        obj: dict = {
            "id": doc.id,
            "title": doc.title,
            "abstract": doc.abstract,
            "ipc": list(doc.ipc_raw),
        }
        if doc.grant_year is not None:
            obj["grant_year"] = doc.grant_year
        sink.write(json.dumps(obj, ensure_ascii=False) + "\n")


def _parse_rating_cell(value: str | None, what: str) -> int | None:
    if value is None or value.strip() == "":
        return None
    try:
        return int(value)
    except ValueError:
        raise DomainError(f"{what} must be an integer, got {value!r}") from None


def load_pairs(source: str | Path | IO[str], corpus: Corpus, strict: bool = False) -> PairsLoad:
    """Read a pair/rating CSV against a loaded corpus.

    Rows must reference two distinct, resolvable patent ids. The rating
    columns are all-or-nothing per row; a row with a partial panel is an
    error rather than a silently unrated pair.
    """
    stream, owned = _open_text(source)
    pairs: list[PatentPair] = []
    issues: list[IngestIssue] = []
    try:
        reader = csv.reader(stream)
        try:
            header = next(reader)
        except StopIteration:
            raise DomainError("pairs file is empty") from None
        header = [h.strip() for h in header]
        if len(header) not in (2, 5, 6) or tuple(header) != PAIR_COLUMNS[: len(header)]:
            raise DomainError(
                "pairs header must be id_a,id_b with optional r1,r2,r3[,expert] block, "
                f"got {','.join(header)}"
            )
        for line_no, row in enumerate(reader, start=2):
            if not row or all(cell.strip() == "" for cell in row):
                continue
            row = [cell.strip() for cell in row]
            if len(row) < 2:
                issues.append(IngestIssue(line_no, "row needs at least id_a and id_b"))
                continue
            if len(row) > len(header):
                issues.append(IngestIssue(line_no, f"row has {len(row)} cells but header has {len(header)}"))
                continue
            cells = dict(zip(header, row + [""] * (len(header) - len(row))))
            try:
                id_a, id_b = cells["id_a"], cells["id_b"]
                for pid in (id_a, id_b):
                    if pid not in corpus:
                        raise UnknownPatentError(pid)
                ratings = [_parse_rating_cell(cells.get(k), k) for k in ("r1", "r2", "r3")]
                expert = _parse_rating_cell(cells.get("expert"), "expert")
                if any(r is not None for r in ratings) and any(r is None for r in ratings):
                    raise DomainError("ratings r1,r2,r3 must be given together or not at all")
                rating = None
                if ratings[0] is not None:
                    rating = RatingRecord(ratings[0], ratings[1], ratings[2], expert=expert)
                elif expert is not None:
                    raise DomainError("expert rating given without panel ratings")
                pairs.append(PatentPair(id_a=id_a, id_b=id_b, rating=rating))
            except DomainError as exc:
                issues.append(IngestIssue(line_no, str(exc)))
    finally:
        if owned:
            stream.close()
    if strict and issues:
        raise IngestError(issues)
    return PairsLoad(pairs, issues)


@dataclass(frozen=True)
class CorpusStats:
    """Descriptive statistics over per-patent 3-depth IPC key counts."""

    documents: int
    mean_keys: float
    sd_keys: float
    histogram: dict[int, int]


def corpus_stats(corpus: Corpus) -> CorpusStats:
    """Count, mean, population standard deviation, and histogram of key counts.

    The standard deviation divides by N (population form): the corpus is
    the whole population being described, not a sample from one.
    """
    if len(corpus) == 0:
        raise DomainError("cannot compute statistics of an empty corpus")
    counts = [len(doc.ipc_keys) for doc in corpus]
    histogram: dict[int, int] = {}
    for c in sorted(counts):
        histogram[c] = histogram.get(c, 0) + 1
    return CorpusStats(
        documents=len(counts),
        mean_keys=statistics.fmean(counts),
        sd_keys=statistics.pstdev(counts),
        histogram=histogram,
    )
