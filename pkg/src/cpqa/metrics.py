"""Label estimation from free-text answers and classification-style metrics.

Estimation is a two-step procedure: whole-word keyword matching over the
ordered label set, then a cosine-similarity argmax over label embeddings for
answers no keyword resolves. Weighted accuracy is overall accuracy (the
speech-emotion-recognition convention); weighted F1 averages per-class F1 by
reference support.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Iterable, Sequence

import numpy as np

from .corpus import ManifestDiagnostic
from .gateway import EmbeddingVector

JUDGE_SCORES = (0, 1, 2, 3, 4, 5)


@dataclass(frozen=True)
class LabelSet:
    """Ordered, distinct, lowercase class labels.

    Order is significant: keyword matching scans labels in order and
    similarity ties resolve to the first maximal label, so the order is part
    of task configuration and belongs in evaluation reports.
    """

    labels: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.labels:
            raise ValueError("label set must be non-empty")
        for label in self.labels:
            if not label or label != label.lower():
                raise ValueError(f"labels must be non-empty lowercase strings, got {label!r}")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("labels must be distinct")

    def __iter__(self):
        return iter(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def __contains__(self, label: object) -> bool:
        return label in self.labels


@dataclass(frozen=True)
class EvalRecord:
    """One scored answer: model text, reference label, estimate, judge score."""

    question_id: str
    answer_text: str
    reference_label: str | None = None
    estimated_label: str | None = None
    judge_score: int | None = None

    def __post_init__(self) -> None:
        if self.judge_score is not None and (
            isinstance(self.judge_score, bool) or self.judge_score not in JUDGE_SCORES
        ):
            raise ValueError(f"judge_score must be an integer 0-5, got {self.judge_score!r}")


def keyword_match(answer: str, labels: LabelSet) -> str | None:
    """Return the first label (in LabelSet order) appearing as a whole word."""
    for label in labels:
        if re.search(rf"\b{re.escape(label)}\b", answer, re.IGNORECASE):
            return label
    return None


def cosine(u: EmbeddingVector, v: EmbeddingVector) -> float:
    """Standard cosine similarity; undefined (raises) for zero vectors."""
    if u.dimension != v.dimension:
        raise ValueError(f"dimension mismatch: {u.dimension} vs {v.dimension}")
    a = np.asarray(u.values, dtype=float)
    b = np.asarray(v.values, dtype=float)
    norm_a = np.linalg.norm(a)
    norm_b = np.linalg.norm(b)
    if norm_a == 0.0 or norm_b == 0.0:
        raise ValueError("cosine similarity is undefined for a zero vector")
    return float(np.dot(a, b) / (norm_a * norm_b))


def estimate_label(
    answer: str,
    labels: LabelSet,
    embed: Callable[[str], EmbeddingVector],
) -> str:
    """Recover a classification label from a free-text answer.

    Keyword matching wins outright; the embedding function is only invoked
    when no label appears in the answer. Ties in similarity resolve to the
    first maximal label in LabelSet order.
    """
    if not answer:
        raise ValueError("answer must be non-empty")
    hit = keyword_match(answer, labels)
    if hit is not None:
        return hit
    answer_vec = embed(answer)
    similarities = [cosine(embed(label), answer_vec) for label in labels]
    return labels.labels[int(np.argmax(similarities))]


def _require_labeled(records: Sequence[EvalRecord]) -> None:
    if not records:
        raise ValueError("metric undefined for empty record list")
    for record in records:
        if record.reference_label is None or record.estimated_label is None:
            raise ValueError(
                f"record {record.question_id!r} lacks reference or estimated label"
            )


def weighted_accuracy(records: Sequence[EvalRecord]) -> float:
    """Overall accuracy: matching records over total records."""
    _require_labeled(records)
    correct = sum(1 for r in records if r.estimated_label == r.reference_label)
    return correct / len(records)


def weighted_f1(records: Sequence[EvalRecord]) -> float:
    """Support-weighted mean of per-class F1 over the reference/estimate pairs.

    Per-class precision and recall come from the confusion matrix; a class
    with zero precision and recall has F1 = 0, and classes never referenced
    carry zero weight.
    """
    _require_labeled(records)
    refs = [r.reference_label for r in records]
    ests = [r.estimated_label for r in records]
    classes = sorted(set(refs) | set(ests))
    total = len(records)
    # Weight inside the sum and divide once, so perfect predictions give
    # exactly 1.0 rather than accumulating float error per class.
    score = 0.0
    for cls in classes:
        tp = sum(1 for ref, est in zip(refs, ests) if ref == cls and est == cls)
        predicted = sum(1 for est in ests if est == cls)
        support = sum(1 for ref in refs if ref == cls)
        precision = tp / predicted if predicted else 0.0
        recall = tp / support if support else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        score += support * f1
    return score / total


def rescale_judge_score(score: int) -> float:
    """Map a 0-5 judge score linearly onto 0-100."""
    if isinstance(score, bool) or score not in JUDGE_SCORES:
        raise ValueError(f"judge score must be an integer 0-5, got {score!r}")
    return float(score * 20)


@dataclass
class ScoreBin:
    """Per-judge-score tallies of estimated-label correctness."""

    count: int = 0
    correct: int = 0
    incorrect: int = 0

    @property
    def correct_ratio(self) -> float | None:
        return self.correct / self.count if self.count else None


@dataclass
class JudgeCorrelationReport:
    """Correctness tallies binned by judge score, plus the mean rescaled score."""

    bins: dict[int, ScoreBin]
    mean_rescaled_score: float | None

    def to_dict(self) -> dict[str, Any]:
        return {
            "bins": {
                str(score): {
                    "count": b.count,
                    "correct": b.correct,
                    "incorrect": b.incorrect,
                    "correct_ratio": b.correct_ratio,
                }
                for score, b in sorted(self.bins.items())
            },
            "mean_rescaled_score": self.mean_rescaled_score,
        }


def judge_correlation(records: Iterable[EvalRecord]) -> JudgeCorrelationReport:
    """Bin records by judge score and tally estimated-label correctness.

    Records missing a judge score or either label do not contribute; empty
    bins report a ratio of None rather than erroring.
    """
    bins = {score: ScoreBin() for score in JUDGE_SCORES}
    rescaled: list[float] = []
    for record in records:
        if record.judge_score is None or record.reference_label is None or record.estimated_label is None:
            continue
        bin_ = bins[record.judge_score]
        bin_.count += 1
        if record.estimated_label == record.reference_label:
            bin_.correct += 1
        else:
            bin_.incorrect += 1
        rescaled.append(rescale_judge_score(record.judge_score))
    mean = sum(rescaled) / len(rescaled) if rescaled else None
    return JudgeCorrelationReport(bins=bins, mean_rescaled_score=mean)


def evaluate_records(
    records: Sequence[EvalRecord],
    labels: LabelSet,
    embed: Callable[[str], EmbeddingVector],
) -> list[EvalRecord]:
    """Fill in estimated labels for every record, validating references.

    Records that already carry an estimated label are left untouched. An
    out-of-vocabulary reference label is a configuration error, not a silent
    extra class.
    """
    out = []
    for record in records:
        if record.reference_label is not None and record.reference_label not in labels:
            raise ValueError(
                f"reference label {record.reference_label!r} of record "
                f"{record.question_id!r} is not in the label set {list(labels.labels)}"
            )
        if record.estimated_label is None:
            estimated = estimate_label(record.answer_text, labels, embed)
            record = EvalRecord(
                question_id=record.question_id,
                answer_text=record.answer_text,
                reference_label=record.reference_label,
                estimated_label=estimated,
                judge_score=record.judge_score,
            )
        out.append(record)
    return out


# --- answers manifest ------------------------------------------------------


def eval_record_from_dict(data: dict[str, Any]) -> EvalRecord:
    if "question_id" not in data or "answer_text" not in data:
        missing = [f for f in ("question_id", "answer_text") if f not in data]
        raise ValueError(f"missing field {missing[0]!r}")
    score = data.get("judge_score")
    if score is not None and not isinstance(score, int):
        raise ValueError(f"field 'judge_score' must be an integer, got {score!r}")
    for field in ("reference_label", "estimated_label"):
        if data.get(field) is not None and not isinstance(data[field], str):
            raise ValueError(f"field {field!r} must be a string, got {data[field]!r}")
    return EvalRecord(
        question_id=str(data["question_id"]),
        answer_text=str(data["answer_text"]),
        reference_label=data.get("reference_label"),
        estimated_label=data.get("estimated_label"),
        judge_score=score,
    )


def eval_record_to_dict(record: EvalRecord) -> dict[str, Any]:
    out: dict[str, Any] = {"question_id": record.question_id, "answer_text": record.answer_text}
    if record.reference_label is not None:
        out["reference_label"] = record.reference_label
    if record.estimated_label is not None:
        out["estimated_label"] = record.estimated_label
    if record.judge_score is not None:
        out["judge_score"] = record.judge_score
    return out


def load_eval_records(path: str | Path) -> tuple[list[EvalRecord], list[ManifestDiagnostic]]:
    """Load an answers manifest (one record per line), collecting diagnostics."""
    records: list[EvalRecord] = []
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
                records.append(eval_record_from_dict(data))
            except ValueError as exc:
                diagnostics.append(ManifestDiagnostic(line_no, str(exc)))
    return records, diagnostics


def write_eval_records(records: Iterable[EvalRecord], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(eval_record_to_dict(record), ensure_ascii=False))
            fh.write("\n")
