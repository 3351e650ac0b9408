"""Parse LLM generation output into QA pairs and enforce quality rules.

Parsing scans for ``Q:`` segments followed by ``A:`` segments. An answer
extends until the next ``Q:`` or the end of the text, so multi-line answers
survive; orphan markers become diagnostics, never exceptions.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .corpus import QAPair

#: Line-anchored segment marker, tolerant of list prefixes like "1." or "-".
_MARKER = re.compile(r"^\s*(?:[-*\u2022]+|\d+[.)])?\s*(Q:|A:)\s?(.*)$")

#: An answer tag appearing inline after a question on the same line.
_INLINE_ANSWER = re.compile(r"\s+A:\s*")

DEFAULT_FORBIDDEN_TERMS = ("text", "transcript", "metadata", "label", "timestamp", "labeled")
DEFAULT_FORBIDDEN_NAME_FRAGMENTS = ("emotion2vec",)


@dataclass(frozen=True)
class ValidationRuleSet:
    """Quality rules for generated pairs.

    Forbidden terms match as whole words (so "label" does not fire inside
    "labels"); name fragments match as substrings, since model names appear
    embedded in phrases.
    """

    forbidden_terms: tuple[str, ...] = DEFAULT_FORBIDDEN_TERMS
    min_answer_words: int = 2
    forbidden_name_fragments: tuple[str, ...] = DEFAULT_FORBIDDEN_NAME_FRAGMENTS

    def __post_init__(self) -> None:
        for term in (*self.forbidden_terms, *self.forbidden_name_fragments):
            if not term or term != term.lower():
                raise ValueError(f"rule terms must be non-empty lowercase strings, got {term!r}")
        if self.min_answer_words < 1:
            raise ValueError(f"min_answer_words must be positive, got {self.min_answer_words}")


@dataclass(frozen=True)
class ParseDiagnostic:
    """A non-fatal parsing problem (orphan or empty segment)."""

    kind: str
    detail: str


@dataclass
class _ParserState:
    question: str | None = None
    answer: str | None = None
    pairs: list[QAPair] = field(default_factory=list)
    diagnostics: list[ParseDiagnostic] = field(default_factory=list)


def _snippet(text: str, limit: int = 60) -> str:
    text = " ".join(text.split())
    return text if len(text) <= limit else text[: limit - 3] + "..."


def _flush(state: _ParserState, clip_id: str) -> None:
    if state.question is None and state.answer is None:
        return
    question = (state.question or "").strip()
    answer = (state.answer or "").strip()
    if state.answer is None:
        state.diagnostics.append(
            ParseDiagnostic("ORPHAN_QUESTION", f"question without answer: {_snippet(question)!r}")
        )
    elif not question:
        state.diagnostics.append(
            ParseDiagnostic("EMPTY_QUESTION", f"answer with empty question: {_snippet(answer)!r}")
        )
    elif not answer:
        state.diagnostics.append(
            ParseDiagnostic("EMPTY_ANSWER", f"question with empty answer: {_snippet(question)!r}")
        )
    else:
        state.pairs.append(
            QAPair(question=question, answer=answer, qtype="UNTYPED", clip_id=clip_id, provenance="generated")
        )
    state.question = None
    state.answer = None


def parse_qa_pairs(raw: str, clip_id: str) -> tuple[list[QAPair], list[ParseDiagnostic]]:
    """Extract (question, answer) pairs from raw generation output.

    Surrounding prose and list markers are ignored. A ``Q:`` on the same line
    as its ``A:`` (separated by whitespace) is split into both parts.
    """
    state = _ParserState()
    for line in raw.splitlines():
        match = _MARKER.match(line)
        if match is None:
            if state.answer is not None:
                state.answer += "\n" + line
            elif state.question is not None:
                state.question += "\n" + line
            continue
        tag, rest = match.groups()
        if tag == "Q:":
            _flush(state, clip_id)
            inline = _INLINE_ANSWER.split(rest, maxsplit=1)
            state.question = inline[0]
            if len(inline) == 2:
                state.answer = inline[1]
        else:
            if state.question is None and state.answer is None:
                state.diagnostics.append(
                    ParseDiagnostic("ORPHAN_ANSWER", f"answer without question: {_snippet(rest)!r}")
                )
            elif state.answer is None:
                state.answer = rest
            else:
                state.answer += "\n" + line
    _flush(state, clip_id)
    return state.pairs, state.diagnostics


def validate_qa(pair: QAPair, rules: ValidationRuleSet = ValidationRuleSet()) -> list[str]:
    """Return every violated rule as a reason code; an empty list means accept.

    Codes: ``FORBIDDEN_TERM(<term>)``, ``ONE_WORD_ANSWER``,
    ``FORBIDDEN_NAME(<fragment>)``.
    """
    reasons = []
    combined = f"{pair.question}\n{pair.answer}"
    for term in rules.forbidden_terms:
        if re.search(rf"\b{re.escape(term)}\b", combined, re.IGNORECASE):
            reasons.append(f"FORBIDDEN_TERM({term})")
    if len(pair.answer.split()) < rules.min_answer_words:
        reasons.append("ONE_WORD_ANSWER")
    lowered = combined.lower()
    for fragment in rules.forbidden_name_fragments:
        if fragment in lowered:
            reasons.append(f"FORBIDDEN_NAME({fragment})")
    return reasons
