"""Parsing generation output and enforcing the QA quality rules."""

from __future__ import annotations

from hypothesis import given
from hypothesis import strategies as st

from cpqa.corpus import QAPair
from cpqa.extract import ValidationRuleSet, parse_qa_pairs, validate_qa


def pair_of(question: str, answer: str) -> QAPair:
    return QAPair(question=question, answer=answer, qtype="UNTYPED", clip_id="c", provenance="generated")


# --- parsing ------------------------------------------------------------------


def test_parse_single_pair():
    raw = "Q: What is the primary emotion in the audio clip?\nA: The speaker sounds happy."
    pairs, diagnostics = parse_qa_pairs(raw, "clip-1")
    assert diagnostics == []
    assert len(pairs) == 1
    assert pairs[0].question == "What is the primary emotion in the audio clip?"
    assert pairs[0].answer == "The speaker sounds happy."
    assert pairs[0].clip_id == "clip-1"
    assert pairs[0].qtype == "UNTYPED"
    assert pairs[0].provenance == "generated"


def test_parse_sequential_pairs():
    pairs, diagnostics = parse_qa_pairs("Q: one\nA: a1\nQ: two\nA: a2", "c")
    assert diagnostics == []
    assert [(p.question, p.answer) for p in pairs] == [("one", "a1"), ("two", "a2")]


def test_parse_orphan_answer():
    pairs, diagnostics = parse_qa_pairs("A: answer with no question", "c")
    assert pairs == []
    assert len(diagnostics) == 1
    assert diagnostics[0].kind == "ORPHAN_ANSWER"


def test_parse_orphan_question():
    pairs, diagnostics = parse_qa_pairs("Q: first without answer\nQ: second\nA: answered", "c")
    assert [(p.question, p.answer) for p in pairs] == [("second", "answered")]
    assert [d.kind for d in diagnostics] == ["ORPHAN_QUESTION"]


def test_parse_multiline_answer():
    raw = "Q: why?\nA: The speaker is upset\nbecause the plan failed.\nQ: next?\nA: done"
    pairs, _ = parse_qa_pairs(raw, "c")
    assert pairs[0].answer == "The speaker is upset\nbecause the plan failed."
    assert pairs[1].question == "next?"


def test_parse_ignores_prose_and_list_markers():
    raw = (
        "Here are the QA pairs you asked for:\n"
        "1. Q: What emotion dominates?\n"
        "   A: Mostly sadness throughout.\n"
        "2. Q: What is the speaker's gender?\n"
        "   A: The speaker is male.\n"
    )
    pairs, diagnostics = parse_qa_pairs(raw, "c")
    assert diagnostics == []
    assert [(p.question, p.answer) for p in pairs] == [
        ("What emotion dominates?", "Mostly sadness throughout."),
        ("What is the speaker's gender?", "The speaker is male."),
    ]


def test_parse_inline_answer_on_same_line():
    pairs, diagnostics = parse_qa_pairs("Q: q A: a", "c")
    assert diagnostics == []
    assert [(p.question, p.answer) for p in pairs] == [("q", "a")]


def test_parse_empty_input():
    assert parse_qa_pairs("", "c") == ([], [])


def test_parse_empty_answer_segment():
    pairs, diagnostics = parse_qa_pairs("Q: why?\nA:\nQ: ok?\nA: yes indeed", "c")
    assert [(p.question, p.answer) for p in pairs] == [("ok?", "yes indeed")]
    assert [d.kind for d in diagnostics] == ["EMPTY_ANSWER"]


_CLEAN_TEXT = st.text(
    alphabet="abcdefghijklmnopqrstuvwxyz ABCDEFGHIJKLMNOPQRSTUVWXYZ'?,.", min_size=1, max_size=60
).filter(lambda s: s.strip() and "Q:" not in s and "A:" not in s)


@given(qa=st.lists(st.tuples(_CLEAN_TEXT, _CLEAN_TEXT), min_size=0, max_size=6))
def test_parse_roundtrip_on_clean_serialization(qa):
    raw = "".join(f"Q: {q}\nA: {a}\n" for q, a in qa)
    pairs, diagnostics = parse_qa_pairs(raw, "c")
    assert diagnostics == []
    assert [(p.question, p.answer) for p in pairs] == [(q.strip(), a.strip()) for q, a in qa]


# --- validation ---------------------------------------------------------------


def test_one_word_answer_rejected():
    reasons = validate_qa(pair_of("What is the emotion?", "happy"))
    assert reasons == ["ONE_WORD_ANSWER"]


def test_forbidden_term_in_question():
    reasons = validate_qa(pair_of("According to the transcript, why is he upset?", "He lost his keys."))
    assert reasons == ["FORBIDDEN_TERM(transcript)"]


def test_clean_pair_accepted():
    pair = pair_of("What is the gender of the speaker in this clip?", "The speaker is female.")
    assert validate_qa(pair) == []


def test_whole_word_boundary_labels_vs_label():
    # "labels" must NOT trigger the forbidden term "label" under whole-word
    # semantics; "labeled" is its own forbidden term.
    assert validate_qa(pair_of("Why does he sort the labels?", "He sorts many things.")) == []
    assert validate_qa(pair_of("Is the label visible?", "It is visible.")) == ["FORBIDDEN_TERM(label)"]
    assert validate_qa(pair_of("Was it labeled?", "It was marked clearly.")) == [
        "FORBIDDEN_TERM(labeled)"
    ]


def test_forbidden_term_case_insensitive():
    assert validate_qa(pair_of("Does the TIMESTAMP matter?", "Not at all here.")) == [
        "FORBIDDEN_TERM(timestamp)"
    ]


def test_forbidden_name_fragment_substring():
    reasons = validate_qa(
        pair_of("What emotion is predicted?", "The Emotion2Vec-style label is anger.")
    )
    assert "FORBIDDEN_NAME(emotion2vec)" in reasons
    assert "FORBIDDEN_TERM(label)" in reasons


def test_multiple_reasons_reported():
    reasons = validate_qa(pair_of("Per the metadata and transcript?", "sad"))
    assert set(reasons) == {"FORBIDDEN_TERM(transcript)", "FORBIDDEN_TERM(metadata)", "ONE_WORD_ANSWER"}


def test_min_answer_words_configurable():
    rules = ValidationRuleSet(min_answer_words=4)
    assert validate_qa(pair_of("Why?", "Three word answer"), rules) == ["ONE_WORD_ANSWER"]
    assert validate_qa(pair_of("Why?", "A four word answer"), rules) == []


def test_ruleset_validates_terms():
    import pytest

    with pytest.raises(ValueError):
        ValidationRuleSet(forbidden_terms=("Upper",))
    with pytest.raises(ValueError):
        ValidationRuleSet(forbidden_terms=("",))


_WORDS = st.lists(
    st.sampled_from(["speaker", "happy", "transcript", "angry", "label", "sounds", "very"]),
    min_size=1,
    max_size=8,
)


@given(
    question_words=_WORDS,
    answer_words=_WORDS,
    extra_term=st.sampled_from(["speaker", "happy", "sounds", "very"]),
)
def test_adding_forbidden_term_is_monotone(question_words, answer_words, extra_term):
    pair = pair_of(" ".join(question_words), " ".join(answer_words))
    base = ValidationRuleSet()
    extended = ValidationRuleSet(forbidden_terms=base.forbidden_terms + (extra_term,))
    base_reasons = set(validate_qa(pair, base))
    extended_reasons = set(validate_qa(pair, extended))
    assert base_reasons <= extended_reasons
    if not extended_reasons:
        assert not base_reasons
