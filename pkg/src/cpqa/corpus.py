"""Domain types, manifest file formats, and validation for clip metadata and QA sets.

Clip manifests are line-delimited JSON, one clip per line, so corpora stream
without loading whole files. Window fields ``predict_emo2vec`` and
``predict_dim`` mirror the upstream metadata naming and are kept verbatim in
the wire format.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Collection, Iterable, Sequence

NEUTRAL = "neutral"

DEFAULT_EMOTION_VOCABULARY: frozenset[str] = frozenset(
    {
        "angry",
        "disgusted",
        "fearful",
        "happy",
        "sad",
        "surprised",
        "embarrassment",
        "sarcasm",
        "worry",
        "neutral",
    }
)

GENDERS: frozenset[str] = frozenset({"male", "female"})

QA_TYPES: frozenset[str] = frozenset({"C", "CE", "CG", "PQA", "UNTYPED"})

QA_PROVENANCES: frozenset[str] = frozenset({"generated", "human", "template"})

#: Slack allowed when comparing word/window end times against the clip
#: duration; upstream alignment tools emit small boundary jitter.
TIME_TOLERANCE = 0.1

#: Nominal emotion-window length in seconds. A shorter final window at the
#: clip end is permitted.
WINDOW_LENGTH = 2.0


@dataclass(frozen=True)
class WordToken:
    """One transcribed word with its time span in seconds."""

    text: str
    start: float
    end: float

    @property
    def midpoint(self) -> float:
        return (self.start + self.end) / 2.0


@dataclass(frozen=True)
class DimScores:
    """Dimensional emotion scores, each in [0, 1]."""

    arousal: float
    dominance: float
    valence: float

    def as_list(self) -> list[float]:
        """Return scores in the wire order [arousal, dominance, valence]."""
        return [self.arousal, self.dominance, self.valence]


@dataclass(frozen=True)
class EmotionWindow:
    """A time interval carrying a categorical emotion and optional extras.

    Attributes:
        start: Window start in seconds.
        end: Window end in seconds (intervals are half-open, [start, end)).
        category: Categorical emotion label from the configured vocabulary.
        dims: Optional dimensional scores for the window.
        gender: Optional speaker gender predicted for the window.
    """

    start: float
    end: float
    category: str
    dims: DimScores | None = None
    gender: str | None = None

    def covers(self, t: float) -> bool:
        return self.start <= t < self.end


@dataclass(frozen=True)
class ClipRecord:
    """Full metadata for one audio clip: words, emotion windows, language."""

    clip_id: str
    language: str
    duration: float
    words: tuple[WordToken, ...] = ()
    windows: tuple[EmotionWindow, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "words", tuple(self.words))
        object.__setattr__(self, "windows", tuple(self.windows))


@dataclass(frozen=True)
class QAPair:
    """A question/answer pair tied to a clip.

    ``qtype`` is one of C (contextual only), CE (contextual + emotion),
    CG (contextual + gender), PQA (paralinguistic only) or UNTYPED.
    """

    question: str
    answer: str
    qtype: str = "UNTYPED"
    clip_id: str = ""
    provenance: str = "generated"


@dataclass(frozen=True)
class Violation:
    """One violated invariant with a machine-readable code."""

    code: str
    message: str

    def __str__(self) -> str:
        return f"{self.code}: {self.message}"


@dataclass(frozen=True)
class ManifestDiagnostic:
    """A per-line load problem: the line never becomes a record."""

    line_no: int
    reason: str


def validate_clip(
    record: ClipRecord,
    vocabulary: Collection[str] = DEFAULT_EMOTION_VOCABULARY,
) -> list[Violation]:
    """Check every clip invariant and return all violations found.

    Never raises: an empty result means the record is valid.
    """
    out: list[Violation] = []

    if not record.clip_id.strip():
        out.append(Violation("CLIP_ID_EMPTY", "clip_id is empty"))
    if not record.duration > 0:
        out.append(Violation("DURATION_INVALID", f"duration {record.duration!r} is not positive"))

    for i, word in enumerate(record.words):
        where = f"words[{i}] ({word.text!r})"
        if not word.text.strip():
            out.append(Violation("WORD_TEXT_EMPTY", f"{where} has empty text"))
        if word.start < 0:
            out.append(Violation("WORD_TIME_NEGATIVE", f"{where} starts at {word.start}"))
        if word.start > word.end:
            out.append(Violation("WORD_TIME_ORDER", f"{where} has start {word.start} > end {word.end}"))
        if word.end > record.duration + TIME_TOLERANCE:
            out.append(
                Violation("TIME_OVERRUN", f"{where} ends at {word.end}, clip duration {record.duration}")
            )

    for prev, cur in zip(record.words, record.words[1:]):
        if cur.start < prev.start:
            out.append(
                Violation("WORDS_UNSORTED", f"word {cur.text!r} at {cur.start} precedes {prev.text!r}")
            )
        if cur.midpoint <= prev.midpoint:
            out.append(
                Violation(
                    "WORDS_MIDPOINT_OVERLAP",
                    f"words {prev.text!r} and {cur.text!r} have non-increasing midpoints",
                )
            )

    last = len(record.windows) - 1
    for i, win in enumerate(record.windows):
        where = f"windows[{i}]"
        if win.start < 0:
            out.append(Violation("WINDOW_TIME_NEGATIVE", f"{where} starts at {win.start}"))
        if not win.start < win.end:
            out.append(Violation("WINDOW_EMPTY", f"{where} has start {win.start} >= end {win.end}"))
        else:
            length = win.end - win.start
            if i < last and abs(length - WINDOW_LENGTH) > TIME_TOLERANCE:
                out.append(
                    Violation("WINDOW_LENGTH", f"{where} is {length:.3f} s, expected {WINDOW_LENGTH} s")
                )
            elif i == last and length > WINDOW_LENGTH + TIME_TOLERANCE:
                out.append(
                    Violation("WINDOW_LENGTH", f"final {where} is {length:.3f} s, longer than {WINDOW_LENGTH} s")
                )
        if win.category not in vocabulary:
            out.append(Violation("CATEGORY_UNKNOWN", f"{where} category {win.category!r} not in vocabulary"))
        if win.gender is not None and win.gender not in GENDERS:
            out.append(Violation("GENDER_UNKNOWN", f"{where} gender {win.gender!r}"))
        if win.dims is not None:
            for name, value in (
                ("arousal", win.dims.arousal),
                ("dominance", win.dims.dominance),
                ("valence", win.dims.valence),
            ):
                if not 0.0 <= value <= 1.0:
                    out.append(Violation("DIM_RANGE", f"{where} {name} {value} outside [0, 1]"))
        if win.end > record.duration + TIME_TOLERANCE:
            out.append(
                Violation("TIME_OVERRUN", f"{where} ends at {win.end}, clip duration {record.duration}")
            )

    for prev, cur in zip(record.windows, record.windows[1:]):
        if cur.start < prev.start:
            out.append(Violation("WINDOWS_UNSORTED", f"window at {cur.start} precedes {prev.start}"))
        if cur.start < prev.end:
            out.append(
                Violation("WINDOWS_OVERLAP", f"window [{cur.start}, {cur.end}) overlaps [{prev.start}, {prev.end})")
            )

    return out


def validate_qa_pair(pair: QAPair) -> list[Violation]:
    """Check QAPair invariants; empty result means valid."""
    out: list[Violation] = []
    if not pair.question.strip():
        out.append(Violation("QA_QUESTION_EMPTY", "question is empty"))
    if not pair.answer.strip():
        out.append(Violation("QA_ANSWER_EMPTY", "answer is empty"))
    if pair.qtype not in QA_TYPES:
        out.append(Violation("QA_TYPE_UNKNOWN", f"qtype {pair.qtype!r} not one of {sorted(QA_TYPES)}"))
    if pair.provenance not in QA_PROVENANCES:
        out.append(
            Violation("QA_PROVENANCE_UNKNOWN", f"provenance {pair.provenance!r} not one of {sorted(QA_PROVENANCES)}")
        )
    return out


# --- wire format -----------------------------------------------------------


def _require(data: dict[str, Any], field: str) -> Any:
    if field not in data:
        raise ValueError(f"missing field {field!r}")
    return data[field]


def _number(data: dict[str, Any], field: str) -> float:
    value = _require(data, field)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValueError(f"field {field!r} must be a number, got {value!r}")
    return float(value)


def _string(data: dict[str, Any], field: str) -> str:
    value = _require(data, field)
    if not isinstance(value, str):
        raise ValueError(f"field {field!r} must be a string, got {value!r}")
    return value


def word_from_dict(data: dict[str, Any]) -> WordToken:
    return WordToken(text=_string(data, "text"), start=_number(data, "start"), end=_number(data, "end"))


def window_from_dict(data: dict[str, Any]) -> EmotionWindow:
    dims = None
    if data.get("predict_dim") is not None:
        raw = data["predict_dim"]
        if not isinstance(raw, Sequence) or isinstance(raw, str) or len(raw) != 3:
            raise ValueError(f"field 'predict_dim' must be an array of 3 numbers, got {raw!r}")
        arousal, dominance, valence = (float(x) for x in raw)
        dims = DimScores(arousal=arousal, dominance=dominance, valence=valence)
    gender = data.get("gender")
    if gender is not None and not isinstance(gender, str):
        raise ValueError(f"field 'gender' must be a string, got {gender!r}")
    return EmotionWindow(
        start=_number(data, "start"),
        end=_number(data, "end"),
        category=_string(data, "predict_emo2vec"),
        dims=dims,
        gender=gender,
    )


def clip_from_dict(data: dict[str, Any]) -> ClipRecord:
    """Build a ClipRecord from a manifest-line dict; raises ValueError on shape errors."""
    words = _require(data, "words")
    windows = _require(data, "windows")
    if not isinstance(words, list) or not isinstance(windows, list):
        raise ValueError("fields 'words' and 'windows' must be arrays")
    for entry in (*words, *windows):
        if not isinstance(entry, dict):
            raise ValueError(f"word/window entries must be objects, got {entry!r}")
    return ClipRecord(
        clip_id=_string(data, "clip_id"),
        language=_string(data, "language"),
        duration=_number(data, "duration"),
        words=tuple(word_from_dict(w) for w in words),
        windows=tuple(window_from_dict(w) for w in windows),
    )


def clip_to_dict(record: ClipRecord) -> dict[str, Any]:
    windows = []
    for win in record.windows:
        entry: dict[str, Any] = {"start": win.start, "end": win.end, "predict_emo2vec": win.category}
        if win.dims is not None:
            entry["predict_dim"] = win.dims.as_list()
        if win.gender is not None:
            entry["gender"] = win.gender
        windows.append(entry)
    return {
        "clip_id": record.clip_id,
        "language": record.language,
        "duration": record.duration,
        "words": [{"text": w.text, "start": w.start, "end": w.end} for w in record.words],
        "windows": windows,
    }


def qa_from_dict(data: dict[str, Any]) -> QAPair:
    return QAPair(
        question=_string(data, "question"),
        answer=_string(data, "answer"),
        qtype=_string(data, "qtype"),
        clip_id=_string(data, "clip_id"),
        provenance=_string(data, "provenance"),
    )


def qa_to_dict(pair: QAPair) -> dict[str, Any]:
    return {
        "question": pair.question,
        "answer": pair.answer,
        "qtype": pair.qtype,
        "clip_id": pair.clip_id,
        "provenance": pair.provenance,
    }


def _load_jsonl(path: str | Path, build, validate) -> tuple[list[Any], list[ManifestDiagnostic]]:
    records: list[Any] = []
    diagnostics: list[ManifestDiagnostic] = []
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                data = json.loads(line)
            except json.JSONDecodeError as exc:
                diagnostics.append(ManifestDiagnostic(line_no, f"invalid JSON: {exc.msg}"))
                continue
            if not isinstance(data, dict):
                diagnostics.append(ManifestDiagnostic(line_no, "record is not an object"))
                continue
            try:
                record = build(data)
            except ValueError as exc:
                diagnostics.append(ManifestDiagnostic(line_no, str(exc)))
                continue
            violations = validate(record)
            if violations:
                diagnostics.append(
                    ManifestDiagnostic(line_no, "; ".join(str(v) for v in violations))
                )
                continue
            records.append(record)
    return records, diagnostics


def load_clip_manifest(
    path: str | Path,
    vocabulary: Collection[str] = DEFAULT_EMOTION_VOCABULARY,
) -> tuple[list[ClipRecord], list[ManifestDiagnostic]]:
    """Load a clip manifest, returning valid records and per-line diagnostics.

    An unreadable file raises OSError; a malformed line never does, it only
    produces a diagnostic with its line number and reason.
    """
    return _load_jsonl(path, clip_from_dict, lambda r: validate_clip(r, vocabulary))


def write_clip_manifest(records: Iterable[ClipRecord], path: str | Path) -> None:
    """Write records one JSON object per line; re-loadable by load_clip_manifest."""
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(clip_to_dict(record), ensure_ascii=False))
            fh.write("\n")


def load_qa_manifest(path: str | Path) -> tuple[list[QAPair], list[ManifestDiagnostic]]:
    """Load a QA manifest (question/answer/qtype/clip_id/provenance per line)."""
    return _load_jsonl(path, qa_from_dict, validate_qa_pair)


def write_qa_manifest(pairs: Iterable[QAPair], path: str | Path) -> None:
    """Write QA pairs as JSONL; re-loadable by load_qa_manifest."""
    with open(path, "w", encoding="utf-8") as fh:
        for pair in pairs:
            fh.write(json.dumps(qa_to_dict(pair), ensure_ascii=False))
            fh.write("\n")


def write_quarantine_manifest(
    rejected: Iterable[tuple[QAPair, Sequence[str]]],
    path: str | Path,
) -> None:
    """Write rejected pairs with their rejection reason codes.

    Lines are QA-manifest lines plus a ``reasons`` array; load_qa_manifest
    reads them back (the extra key is ignored), so nothing is discarded.
    """
    with open(path, "w", encoding="utf-8") as fh:
        for pair, reasons in rejected:
            data = qa_to_dict(pair)
            data["reasons"] = list(reasons)
            fh.write(json.dumps(data, ensure_ascii=False))
            fh.write("\n")
