"""Expert rating records and the panel-disagreement adjudication flow.

Ratings live on a seven-value scale: the five odd numbers between 0 and
10, plus 0 ("totally different") and 10 ("exactly same") as the extremes.
Three panelists rate each pair; when their scores spread too far, a law
expert's rating replaces the panel mean.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

from .errors import DomainError, PendingExpertError

RATING_SCALE = frozenset({0, 1, 3, 5, 7, 9, 10})

#: Sum of squared deviations from the panel mean at or above which the
#: panel is considered too divided and the law expert's rating is used.
DISAGREEMENT_THRESHOLD = 8.0

Route = Literal["panel_mean", "law_expert"]


def check_rating(value: int, what: str = "rating") -> int:
    """Validate one rating value against the seven-point scale."""
    if not isinstance(value, int) or isinstance(value, bool) or value not in RATING_SCALE:
        raise DomainError(f"{what} must be one of {sorted(RATING_SCALE)}, got {value!r}")
    return value


@dataclass(frozen=True)
class RatingRecord:
    """Three panelist ratings plus an optional law-expert rating."""

    r1: int
    r2: int
    r3: int
    expert: int | None = None

    def __post_init__(self):
        for name in ("r1", "r2", "r3"):
            check_rating(getattr(self, name), name)
        if self.expert is not None:
            check_rating(self.expert, "expert")


@dataclass(frozen=True)
class AdjudicatedScore:
    """Outcome of adjudicating one RatingRecord."""

    score: float
    route: Route
    distance: float


def adjudicate(record: RatingRecord, pair: str | None = None) -> AdjudicatedScore:
    """Resolve a panel's three ratings into a single score.

    The panel mean mu and the squared-deviation sum around it decide the
    route: at or above the disagreement threshold the law expert's rating
    replaces the panel mean (the boundary is inclusive). If that route is
    taken but no expert rating is present, PendingExpertError is raised;
    ``pair`` only labels that error.
    """
    mu = (record.r1 + record.r2 + record.r3) / 3
    distance = (mu - record.r1) ** 2 + (mu - record.r2) ** 2 + (mu - record.r3) ** 2
    if distance >= DISAGREEMENT_THRESHOLD:
        if record.expert is None:
            raise PendingExpertError(pair=pair)
        return AdjudicatedScore(score=float(record.expert), route="law_expert", distance=distance)
    return AdjudicatedScore(score=mu, route="panel_mean", distance=distance)
