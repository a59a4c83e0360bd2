"""Glicko rating of images from pairwise comparisons.

Two departures from the classic formulation, both because images do not
change between matches: there is no time-based RD inflation (RD only ever
shrinks), and ratings are recomputed after every single comparison rather
than per rating period. Each image carries one rating per prompt
dimension ("aesthetic" and "complexity"), so the two survey questions
never mix. New images start at rating 1500, RD 350.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass

from .errors import ParameterError

log = logging.getLogger(__name__)

INITIAL_RATING = 1500.0
INITIAL_RD = 350.0

PROMPT_AESTHETIC = "aesthetic"
PROMPT_COMPLEXITY = "complexity"
PROMPTS = (PROMPT_AESTHETIC, PROMPT_COMPLEXITY)

OUTCOME_SCORES = {"left": 1.0, "right": 0.0, "tie": 0.5}

_Q = math.log(10.0) / 400.0


@dataclass(frozen=True)
class Rating:
    rating: float = INITIAL_RATING
    rd: float = INITIAL_RD
    matches: int = 0


@dataclass(frozen=True)
class ComparisonEvent:
    """One finalized survey comparison."""

    comparison_id: str
    session_id: str
    dataset: str
    left: str
    right: str
    prompt: str  # one of PROMPTS
    outcome: str  # "left" | "right" | "tie"
    duration_ms: int
    timestamp: str

    def to_json(self) -> str:
        return json.dumps(
            {
                "comparison_id": self.comparison_id,
                "session_id": self.session_id,
                "dataset": self.dataset,
                "left": self.left,
                "right": self.right,
                "prompt": self.prompt,
                "outcome": self.outcome,
                "duration_ms": self.duration_ms,
                "timestamp": self.timestamp,
            },
            separators=(",", ":"),
        )

    @classmethod
    def from_json(cls, line: str) -> "ComparisonEvent":
        doc = json.loads(line)
        event = cls(
            comparison_id=str(doc["comparison_id"]),
            session_id=str(doc["session_id"]),
            dataset=str(doc["dataset"]),
            left=str(doc["left"]),
            right=str(doc["right"]),
            prompt=str(doc["prompt"]),
            outcome=str(doc["outcome"]),
            duration_ms=int(doc["duration_ms"]),
            timestamp=str(doc["timestamp"]),
        )
        if event.prompt not in PROMPTS:
            raise ParameterError(f"unknown prompt {event.prompt!r}")
        if event.outcome not in OUTCOME_SCORES:
            raise ParameterError(f"unknown outcome {event.outcome!r}")
        if event.left == event.right:
            raise ParameterError("an image cannot be compared with itself")
        return event


def _g(rd: float) -> float:
    return 1.0 / math.sqrt(1.0 + 3.0 * _Q * _Q * rd * rd / math.pi**2)


def glicko_update(a: Rating, b: Rating, score_a: float) -> tuple[Rating, Rating]:
    """Single-game update of both sides from pre-match snapshots.

    score_a is a's result: 1 win, 0.5 tie, 0 loss. Both new ratings are
    computed from the opponents' pre-match values, so the update order
    within a comparison cannot bias the result. RD strictly decreases.
    """
    if score_a not in (0.0, 0.5, 1.0):
        raise ParameterError(f"score must be 0, 0.5 or 1, got {score_a}")
    for side in (a, b):
        if not (math.isfinite(side.rating) and math.isfinite(side.rd) and side.rd > 0):
            raise ParameterError(f"rating state must be finite with rd > 0, got {side}")
    return (
        _updated_side(a, b, score_a),
        _updated_side(b, a, 1.0 - score_a),
    )


def _updated_side(own: Rating, opp: Rating, score: float) -> Rating:
    g_opp = _g(opp.rd)
    expected = 1.0 / (1.0 + 10.0 ** (-g_opp * (own.rating - opp.rating) / 400.0))
    inv_d2 = _Q * _Q * g_opp * g_opp * expected * (1.0 - expected)
    denom = 1.0 / (own.rd * own.rd) + inv_d2
    new_rating = own.rating + _Q / denom * g_opp * (score - expected)
    new_rd = math.sqrt(1.0 / denom)
    return Rating(rating=new_rating, rd=new_rd, matches=own.matches + 1)


class RankingTable:
    """Per-(dataset, image) ratings, one Rating per prompt dimension.

    Images never touched in a dimension report the initial (1500, 350, 0)
    state when queried.
    """

    def __init__(self):
        self._entries: dict[tuple[str, str], dict[str, Rating]] = {}

    def get(self, dataset: str, image_id: str, prompt: str) -> Rating:
        if prompt not in PROMPTS:
            raise ParameterError(f"unknown prompt {prompt!r}")
        return self._entries.get((dataset, image_id), {}).get(prompt, Rating())

    def _slot(self, dataset: str, image_id: str) -> dict[str, Rating]:
        return self._entries.setdefault((dataset, image_id), {})

    def apply(self, event: ComparisonEvent) -> None:
        score_left = OUTCOME_SCORES[event.outcome]
        left = self.get(event.dataset, event.left, event.prompt)
        right = self.get(event.dataset, event.right, event.prompt)
        new_left, new_right = glicko_update(left, right, score_left)
        self._slot(event.dataset, event.left)[event.prompt] = new_left
        self._slot(event.dataset, event.right)[event.prompt] = new_right

    def images(self) -> list[tuple[str, str]]:
        return list(self._entries.keys())

    def datasets(self) -> set[str]:
        return {dataset for dataset, _ in self._entries}

    def __len__(self) -> int:
        return len(self._entries)

    def __eq__(self, other) -> bool:
        return isinstance(other, RankingTable) and self._entries == other._entries

    def subset(self, keys) -> "RankingTable":
        out = RankingTable()
        for key in keys:
            out._entries[key] = dict(self._entries[key])
        return out

    def ranked(self, prompt: str, dataset: str | None = None) -> list[tuple[str, str, Rating]]:
        """(dataset, image, rating) sorted by rating descending; ties break
        on the key for determinism."""
        rows = [
            (ds, img, self.get(ds, img, prompt))
            for (ds, img) in self._entries
            if dataset is None or ds == dataset
        ]
        rows.sort(key=lambda row: (-row[2].rating, row[0], row[1]))
        return rows


def replay(events, strict: bool = False) -> RankingTable:
    """Fold an ordered event stream into a RankingTable.

    Malformed events raise when strict, otherwise they are logged with
    their index and skipped; replay of the same log is deterministic.
    """
    table = RankingTable()
    for index, event in enumerate(events):
        try:
            if isinstance(event, str):
                event = ComparisonEvent.from_json(event)
            table.apply(event)
        except (ParameterError, KeyError, ValueError) as exc:
            if strict:
                raise ParameterError(f"event {index}: {exc}") from exc
            log.warning("skipping malformed event %d: %s", index, exc)
    return table


def filter_by_rd(table: RankingTable, max_rd: float) -> tuple[RankingTable, float]:
    """Keep images whose RD is below max_rd in BOTH prompt dimensions.

    Returns the filtered table and the retained fraction relative to the
    input table (0.0 for an empty input).
    """
    keep = [
        key
        for key in table.images()
        if all(table.get(key[0], key[1], prompt).rd < max_rd for prompt in PROMPTS)
    ]
    fraction = len(keep) / len(table) if len(table) else 0.0
    return table.subset(keep), fraction
