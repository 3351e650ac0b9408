"""Emotion-rich corpus condensation: language, duration, consistency, occurrence.

The pipeline is applied in a fixed short-circuit order. A clip rejected at an
earlier stage is never evaluated at a later one, and the report accounts for
every input clip exactly once.

Windows whose categorical polarity disagrees with the configured valence
range are relabeled neutral rather than dropping the clip; clips that then
lack enough emotional windows fall out at the occurrence stage.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field, replace
from typing import Any, Iterable, Mapping, Sequence

from .corpus import NEUTRAL, ClipRecord

LANGUAGE = "LANGUAGE"
DURATION = "DURATION"
OCCURRENCE = "OCCURRENCE"

POLARITIES = ("negative", "positive", "neutral")

DEFAULT_POLARITY_MAP: dict[str, str] = {
    "angry": "negative",
    "sad": "negative",
    "disgusted": "negative",
    "fearful": "negative",
    "embarrassment": "negative",
    "worry": "negative",
    "happy": "positive",
    "surprised": "positive",
    "sarcasm": "positive",
    "neutral": "neutral",
}

DEFAULT_MIN_COUNTS: dict[str, int] = {
    "angry": 3,
    "happy": 3,
    "sad": 2,
    "surprised": 2,
    "disgusted": 1,
    "fearful": 1,
}


@dataclass(frozen=True)
class ValenceInterval:
    """A sub-interval of [0, 1] with configurable boundary inclusion."""

    lo: float
    hi: float
    closed_lo: bool = True
    closed_hi: bool = True

    def __post_init__(self) -> None:
        if not (0.0 <= self.lo <= 1.0 and 0.0 <= self.hi <= 1.0):
            raise ValueError(f"interval bounds must lie in [0, 1], got [{self.lo}, {self.hi}]")
        if self.lo > self.hi:
            raise ValueError(f"interval lower bound {self.lo} exceeds upper bound {self.hi}")

    def contains(self, value: float) -> bool:
        above = value >= self.lo if self.closed_lo else value > self.lo
        below = value <= self.hi if self.closed_hi else value < self.hi
        return above and below

    def to_dict(self) -> dict[str, Any]:
        return {"lo": self.lo, "hi": self.hi, "closed_lo": self.closed_lo, "closed_hi": self.closed_hi}

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "ValenceInterval":
        return cls(
            lo=float(data["lo"]),
            hi=float(data["hi"]),
            closed_lo=bool(data.get("closed_lo", True)),
            closed_hi=bool(data.get("closed_hi", True)),
        )


@dataclass(frozen=True)
class CondenseConfig:
    """Thresholds for the condensation pipeline.

    Defaults follow the production setup: valence ranges [0, 0.5), (0.5, 1.0]
    and [0.4, 0.6] for negative/positive/neutral, per-category minimum window
    counts of 3/3/2/2/1/1 for angry/happy/sad/surprised/disgusted/fearful,
    and a 20-30 second clip duration gate.
    """

    target_language: str = "en"
    valence_negative: ValenceInterval = ValenceInterval(0.0, 0.5, closed_lo=True, closed_hi=False)
    valence_positive: ValenceInterval = ValenceInterval(0.5, 1.0, closed_lo=False, closed_hi=True)
    valence_neutral: ValenceInterval = ValenceInterval(0.4, 0.6)
    min_counts: dict[str, int] = field(default_factory=lambda: dict(DEFAULT_MIN_COUNTS))
    duration_min: float = 20.0
    duration_max: float = 30.0
    polarity_map: dict[str, str] = field(default_factory=lambda: dict(DEFAULT_POLARITY_MAP))

    def __post_init__(self) -> None:
        if not self.duration_min < self.duration_max:
            raise ValueError(
                f"duration_min {self.duration_min} must be below duration_max {self.duration_max}"
            )
        for category, count in self.min_counts.items():
            if count < 0:
                raise ValueError(f"min_counts[{category!r}] is negative: {count}")
        for category, polarity in self.polarity_map.items():
            if polarity not in POLARITIES:
                raise ValueError(f"polarity_map[{category!r}] is {polarity!r}, expected one of {POLARITIES}")

    def interval_for(self, polarity: str) -> ValenceInterval:
        if polarity == "negative":
            return self.valence_negative
        if polarity == "positive":
            return self.valence_positive
        if polarity == "neutral":
            return self.valence_neutral
        raise ValueError(f"unknown polarity {polarity!r}")

    def to_dict(self) -> dict[str, Any]:
        return {
            "target_language": self.target_language,
            "valence_negative": self.valence_negative.to_dict(),
            "valence_positive": self.valence_positive.to_dict(),
            "valence_neutral": self.valence_neutral.to_dict(),
            "min_counts": dict(self.min_counts),
            "duration_min": self.duration_min,
            "duration_max": self.duration_max,
            "polarity_map": dict(self.polarity_map),
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "CondenseConfig":
        kwargs: dict[str, Any] = {}
        if "target_language" in data:
            kwargs["target_language"] = str(data["target_language"])
        for name in ("valence_negative", "valence_positive", "valence_neutral"):
            if name in data:
                kwargs[name] = ValenceInterval.from_dict(data[name])
        if "min_counts" in data:
            kwargs["min_counts"] = {str(k): int(v) for k, v in data["min_counts"].items()}
        for name in ("duration_min", "duration_max"):
            if name in data:
                kwargs[name] = float(data[name])
        if "polarity_map" in data:
            kwargs["polarity_map"] = {str(k): str(v) for k, v in data["polarity_map"].items()}
        return cls(**kwargs)


@dataclass
class CondenseReport:
    """Audit trail: where every input clip went and why."""

    input_count: int = 0
    kept: list[str] = field(default_factory=list)
    rejected: dict[str, str] = field(default_factory=dict)
    qualification_counts: dict[str, int] = field(default_factory=dict)
    relabeled_neutral: dict[str, int] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "input_count": self.input_count,
            "kept": list(self.kept),
            "rejected": dict(self.rejected),
            "qualification_counts": dict(self.qualification_counts),
            "relabeled_neutral": dict(self.relabeled_neutral),
        }


def language_filter(
    clips: Sequence[ClipRecord], target: str
) -> tuple[list[ClipRecord], list[ClipRecord]]:
    """Split clips into (kept, rejected) by case-insensitive language tag match."""
    kept, rejected = [], []
    for clip in clips:
        (kept if clip.language.lower() == target.lower() else rejected).append(clip)
    return kept, rejected


def polarity_of(category: str, polarity_map: Mapping[str, str] = DEFAULT_POLARITY_MAP) -> str:
    """Look up the polarity group of a categorical emotion."""
    try:
        return polarity_map[category]
    except KeyError:
        raise ValueError(f"category {category!r} has no polarity mapping") from None


def ser_consistency_filter(clip: ClipRecord, cfg: CondenseConfig) -> ClipRecord:
    """Relabel windows whose category polarity disagrees with their valence.

    A window agrees when its valence lies in the interval configured for its
    category's polarity. Windows without dimensional scores pass through
    unchanged; window count and all other fields are preserved.
    """
    windows = []
    for win in clip.windows:
        if win.dims is None:
            windows.append(win)
            continue
        interval = cfg.interval_for(polarity_of(win.category, cfg.polarity_map))
        if interval.contains(win.dims.valence):
            windows.append(win)
        else:
            windows.append(replace(win, category=NEUTRAL))
    return replace(clip, windows=tuple(windows))


def emotion_occurrence_filter(
    clip: ClipRecord, cfg: CondenseConfig
) -> tuple[bool, set[str]]:
    """Decide whether a clip is emotion-rich.

    Counts windows per category; a clip passes when at least one category with
    a positive configured minimum reaches its threshold. Categories absent
    from min_counts never qualify a clip.
    """
    counts = Counter(win.category for win in clip.windows)
    qualifying = {
        category
        for category, minimum in cfg.min_counts.items()
        if minimum > 0 and counts.get(category, 0) >= minimum
    }
    return bool(qualifying), qualifying


def condense_corpus(
    clips: Iterable[ClipRecord], cfg: CondenseConfig
) -> tuple[list[ClipRecord], CondenseReport]:
    """Run the full condensation pipeline in order, preserving input order.

    Stage order: language filter, duration gate, consistency relabeling,
    occurrence filter. Selected clips carry their consistency-filtered
    windows.
    """
    report = CondenseReport()
    selected: list[ClipRecord] = []
    for clip in clips:
        report.input_count += 1
        if clip.language.lower() != cfg.target_language.lower():
            report.rejected[clip.clip_id] = LANGUAGE
            continue
        if not cfg.duration_min <= clip.duration <= cfg.duration_max:
            report.rejected[clip.clip_id] = DURATION
            continue
        filtered = ser_consistency_filter(clip, cfg)
        report.relabeled_neutral[clip.clip_id] = sum(
            1 for before, after in zip(clip.windows, filtered.windows) if before.category != after.category
        )
        passed, qualifying = emotion_occurrence_filter(filtered, cfg)
        if not passed:
            report.rejected[clip.clip_id] = OCCURRENCE
            continue
        for category in qualifying:
            report.qualification_counts[category] = report.qualification_counts.get(category, 0) + 1
        report.kept.append(clip.clip_id)
        selected.append(filtered)
    return selected, report
