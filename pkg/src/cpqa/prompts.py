"""Bit-exact prompt text: the QA-generation template and question augmentation.

All fixed wording lives in versioned data files under ``templates/`` with
frozen sha256 checksums; rendering only substitutes the two input slots and,
for the paralinguistic-only variant, removes the contextual example-question
lines listed in ``contextual_question_lines.txt``.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from importlib import resources
from typing import Sequence

from .alignment import AlignedWord
from .corpus import NEUTRAL, ClipRecord, EmotionWindow

TEMPLATE_FILES = (
    "qa_generation.txt",
    "contextual_question_lines.txt",
    "augment_instruction1.txt",
    "augment_instruction2.txt",
)


class GenerationMode(Enum):
    """QA-generation prompt variant.

    CPQA keeps the full instruction set; PQA_STAR omits the contextual
    example questions so generation stays paralinguistic-only.
    """

    CPQA = "cpqa"
    PQA_STAR = "pqa-star"


@lru_cache(maxsize=None)
def _asset(name: str) -> str:
    return resources.files(__package__).joinpath("templates", name).read_text(encoding="utf-8")


def template_checksums() -> dict[str, str]:
    """Compute sha256 of every shipped template asset."""
    out = {}
    for name in TEMPLATE_FILES:
        data = resources.files(__package__).joinpath("templates", name).read_bytes()
        out[name] = hashlib.sha256(data).hexdigest()
    return out


def expected_template_checksums() -> dict[str, str]:
    """The frozen checksums recorded alongside the assets."""
    return json.loads(_asset("checksums.json"))


def augmentation_instructions() -> tuple[str, str]:
    """Return (instruction1, instruction2) for question augmentation, verbatim."""
    return _asset("augment_instruction1.txt"), _asset("augment_instruction2.txt")


def _fmt_seconds(value: float) -> str:
    """Integral seconds print without decimals; otherwise minimal decimal form."""
    value = float(value)
    if value.is_integer():
        return str(int(value))
    return repr(value)


@dataclass(frozen=True)
class MetadataBlock:
    """Time-stamped non-neutral emotion labels, the source of the label string."""

    entries: tuple[tuple[float, float, str], ...]

    @classmethod
    def from_windows(cls, windows: Sequence[EmotionWindow]) -> "MetadataBlock":
        kept = [(w.start, w.end, w.category) for w in windows if w.category != NEUTRAL]
        kept.sort(key=lambda e: e[0])
        return cls(entries=tuple(kept))

    def render(self) -> str:
        if not self.entries:
            return ""
        parts = [f"{_fmt_seconds(s)}-{_fmt_seconds(e)} second: {label}" for s, e, label in self.entries]
        return ", ".join(parts) + "."


def format_emotion_labels(windows: Sequence[EmotionWindow]) -> str:
    """Render non-neutral windows as e.g. "2-4 second: sad, 10-12 second: angry."

    Neutral windows are excluded (unlabeled time is declared neutral by the
    augmentation instructions); an all-neutral or empty input renders as "".
    """
    return MetadataBlock.from_windows(windows).render()


def augment_question_with_metadata(question: str, windows: Sequence[EmotionWindow]) -> str:
    """Append the emotion-metadata instructions to a question.

    Pure concatenation: question, instruction1 with its ``#XXXX#`` slot
    replaced by the rendered emotion labels, then instruction2, joined by
    single spaces.
    """
    if not question:
        raise ValueError("question must be non-empty")
    instruction1, instruction2 = augmentation_instructions()
    filled = instruction1.replace("#XXXX#", format_emotion_labels(windows))
    return f"{question} {filled} {instruction2}"


def render_word_metadata(aligned: Sequence[AlignedWord]) -> str:
    """Serialize per-word paralinguistic records as a compact JSON array.

    Keys follow the template's metadata guide: ``predict_emo2vec`` for the
    categorical label, ``predict_dim`` for [arousal, dominance, valence].
    Absent dims/gender are omitted rather than serialized as null.
    """
    entries = []
    for item in aligned:
        entry: dict[str, object] = {"word": item.word.text, "predict_emo2vec": item.category}
        if item.dims is not None:
            entry["predict_dim"] = item.dims.as_list()
        if item.gender is not None:
            entry["gender"] = item.gender
        entries.append(entry)
    return json.dumps(entries, ensure_ascii=False)


def build_qa_generation_prompt(
    clip: ClipRecord,
    aligned: Sequence[AlignedWord],
    mode: GenerationMode = GenerationMode.CPQA,
) -> str:
    """Render the QA-generation prompt for one clip.

    ``{utterance}`` is filled with the clip's space-joined word texts and
    ``{emotion_gender_level_data}`` with the serialized per-word metadata;
    every other byte comes from the stored template. In PQA_STAR mode the
    contextual example-question lines are removed first.
    """
    if not clip.words:
        raise ValueError(f"clip {clip.clip_id!r} has no words to prompt about")
    if len(aligned) != len(clip.words):
        raise ValueError(
            f"aligned word count {len(aligned)} does not match clip word count {len(clip.words)}"
        )
    template = _asset("qa_generation.txt")
    if mode is GenerationMode.PQA_STAR:
        omitted = set(_asset("contextual_question_lines.txt").splitlines())
        template = "\n".join(line for line in template.split("\n") if line not in omitted)
    utterance = " ".join(w.text for w in clip.words)
    return template.replace("{utterance}", utterance).replace(
        "{emotion_gender_level_data}", render_word_metadata(aligned)
    )
