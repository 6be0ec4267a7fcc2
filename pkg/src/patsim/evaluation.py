"""Correlation of model scores against adjudicated expert ratings.

Pearson is the usual product-moment coefficient. Spearman is, by default,
Pearson over average-fractional ranks: exact under ties and equal to the
closed form 1 - 6*sum(D^2)/(n*(n^2-1)) whenever there are none. A second
mode, "paper-literal", computes 1 - 6*sum(D^2)/(n*(n-1)) instead; that
denominator does not yield 1.0 on perfectly concordant data for n > 2, so
it exists only for side-by-side comparison and is clearly non-standard.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Literal, Sequence

import numpy as np

from .errors import ConstantInputError, DomainError
from .ratings import AdjudicatedScore

if TYPE_CHECKING:
    from .hybrid import SimilarityReport

SpearmanMode = Literal["standard", "paper-literal"]

SCORE_FIELDS = ("sd", "sdtd")


def _as_pair(x: Sequence[float], y: Sequence[float]) -> tuple[np.ndarray, np.ndarray]:
    xa = np.asarray(x, dtype=np.float64)
    ya = np.asarray(y, dtype=np.float64)
    if xa.ndim != 1 or ya.ndim != 1:
        raise DomainError("correlation inputs must be one-dimensional")
    if xa.shape[0] != ya.shape[0]:
        raise DomainError(f"length mismatch: {xa.shape[0]} vs {ya.shape[0]}")
    if xa.shape[0] < 2:
        raise DomainError(f"correlation needs at least 2 observations, got {xa.shape[0]}")
    if not (np.all(np.isfinite(xa)) and np.all(np.isfinite(ya))):
        raise DomainError("correlation inputs must be finite")
    if np.all(xa == xa[0]) or np.all(ya == ya[0]):
        raise ConstantInputError("correlation undefined for a constant sequence")
    return xa, ya


def pearson(x: Sequence[float], y: Sequence[float]) -> float:
    """Linear correlation coefficient, clamped into [-1, 1]."""
    xa, ya = _as_pair(x, y)
    dx = xa - xa.mean()
    dy = ya - ya.mean()
    value = float(np.dot(dx, dy) / np.sqrt(np.dot(dx, dx) * np.dot(dy, dy)))
    return min(1.0, max(-1.0, value))


def average_ranks(values: Sequence[float]) -> np.ndarray:
    """1-based ranks, ties resolved as the mean of their rank positions."""
    v = np.asarray(values, dtype=np.float64)
    order = np.argsort(v, kind="stable")
    ranks = np.empty(v.shape[0], dtype=np.float64)
    i = 0
    while i < v.shape[0]:
        j = i
        while j + 1 < v.shape[0] and v[order[j + 1]] == v[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def spearman(x: Sequence[float], y: Sequence[float], mode: SpearmanMode = "standard") -> float:
    """Rank correlation coefficient.

    ``mode="paper-literal"`` swaps the usual n*(n^2-1) denominator for
    n*(n-1); see the module docstring before using it.
    """
    xa, ya = _as_pair(x, y)
    rx = average_ranks(xa)
    ry = average_ranks(ya)
    if mode == "standard":
        return pearson(rx, ry)
    if mode == "paper-literal":
        n = rx.shape[0]
        d = rx - ry
        return 1.0 - 6.0 * float(np.dot(d, d)) / (n * (n - 1))
    raise DomainError(f"unknown spearman mode {mode!r}")


@dataclass(frozen=True)
class EvalSummary:
    """Correlation of one score field against the adjudicated ratings."""

    n: int
    pearson: float
    spearman: float
    field: str
    truth_mean: float
    truth_sd: float

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "pearson": round(self.pearson, 6),
            "spearman": round(self.spearman, 6),
            "field": self.field,
            "truth_mean": round(self.truth_mean, 6),
            "truth_sd": round(self.truth_sd, 6),
        }


def evaluate(
    reports: Sequence["SimilarityReport"],
    truths: Sequence[AdjudicatedScore],
    field: str,
    spearman_mode: SpearmanMode = "standard",
) -> EvalSummary:
    """Correlate one report field (sd or sdtd) with adjudicated scores.

    ``reports`` and ``truths`` must be aligned: truths[i] is the human
    judgment for the pair scored in reports[i].
    """
    if field not in SCORE_FIELDS:
        raise DomainError(f"field must be one of {SCORE_FIELDS}, got {field!r}")
    if len(reports) != len(truths):
        raise DomainError(f"got {len(reports)} reports but {len(truths)} adjudicated scores")
    scores = [getattr(r, field) for r in reports]
    truth_values = np.asarray([t.score for t in truths], dtype=np.float64)
    return EvalSummary(
        n=len(reports),
        pearson=pearson(scores, truth_values),
        spearman=spearman(scores, truth_values, mode=spearman_mode),
        field=field,
        truth_mean=float(truth_values.mean()),
        truth_sd=float(truth_values.std()),
    )
