"""Condensation pipeline: filters, report accounting, brute-force agreement."""

from __future__ import annotations

import random
from collections import Counter

import pytest

from cpqa.condense import (
    DURATION,
    LANGUAGE,
    OCCURRENCE,
    CondenseConfig,
    ValenceInterval,
    condense_corpus,
    emotion_occurrence_filter,
    language_filter,
    polarity_of,
    ser_consistency_filter,
)
from cpqa.corpus import DEFAULT_EMOTION_VOCABULARY, ClipRecord, DimScores, EmotionWindow

from conftest import make_clip

CFG = CondenseConfig()


def clip_with(clip_id, categories, valences=None, language="en", duration=25.0, dims_mask=None):
    """Clip with tiled 2 s windows; dims_mask=False entries carry no dims."""
    windows = []
    for i, category in enumerate(categories):
        dims = None
        if valences is not None and (dims_mask is None or dims_mask[i]):
            dims = DimScores(0.5, 0.5, valences[i])
        windows.append(EmotionWindow(2.0 * i, 2.0 * (i + 1), category, dims=dims))
    return make_clip(clip_id=clip_id, language=language, duration=duration, windows=tuple(windows))


# --- individual filters -----------------------------------------------------


def test_language_filter_identity():
    clips = [clip_with(f"c{i}", ["angry"], [0.2]) for i in range(3)]
    kept, rejected = language_filter(clips, "en")
    assert kept == clips and rejected == []


def test_language_filter_mixed():
    en = clip_with("en1", ["angry"], [0.2])
    zh = clip_with("zh1", ["angry"], [0.2], language="zh")
    kept, rejected = language_filter([en, zh], "en")
    assert kept == [en] and rejected == [zh]


def test_language_filter_case_insensitive():
    clip = clip_with("c", ["angry"], [0.2])
    kept, _ = language_filter([clip], "EN")
    assert kept == [clip]


def test_polarity_defaults():
    assert polarity_of("sad") == "negative"
    assert polarity_of("happy") == "positive"
    assert polarity_of("surprised") == "positive"
    assert polarity_of("neutral") == "neutral"


def test_polarity_unknown_category():
    with pytest.raises(ValueError):
        polarity_of("elated")


def test_consistency_keeps_agreeing_window():
    clip = clip_with("c", ["sad"], [0.3])
    out = ser_consistency_filter(clip, CFG)
    assert out.windows[0].category == "sad"


def test_consistency_relabels_disagreeing_window():
    clip = clip_with("c", ["happy"], [0.3])
    out = ser_consistency_filter(clip, CFG)
    assert out.windows[0].category == "neutral"
    assert out.windows[0].dims == clip.windows[0].dims  # only the category changes


def test_consistency_neutral_band():
    clip = clip_with("c", ["neutral"], [0.5])
    out = ser_consistency_filter(clip, CFG)
    assert out.windows[0].category == "neutral"


def test_consistency_boundary_valences():
    # 0.5 is outside both [0, 0.5) and (0.5, 1.0].
    sad_at_half = clip_with("c", ["sad"], [0.5])
    assert ser_consistency_filter(sad_at_half, CFG).windows[0].category == "neutral"
    happy_at_half = clip_with("c", ["happy"], [0.5])
    assert ser_consistency_filter(happy_at_half, CFG).windows[0].category == "neutral"
    happy_at_one = clip_with("c", ["happy"], [1.0])
    assert ser_consistency_filter(happy_at_one, CFG).windows[0].category == "happy"


def test_consistency_passes_windows_without_dims():
    clip = clip_with("c", ["happy", "sad"], valences=[0.1, 0.1], dims_mask=[False, True])
    out = ser_consistency_filter(clip, CFG)
    assert out.windows[0].category == "happy"  # no dims, untouched
    assert out.windows[1].category == "sad"


def test_occurrence_pass_at_threshold():
    clip = clip_with("c", ["angry", "angry", "angry"])
    passed, qualifying = emotion_occurrence_filter(clip, CFG)
    assert passed and qualifying == {"angry"}


def test_occurrence_below_threshold():
    clip = clip_with("c", ["angry", "angry"])
    passed, qualifying = emotion_occurrence_filter(clip, CFG)
    assert not passed and qualifying == set()


def test_occurrence_single_fearful():
    clip = clip_with("c", ["fearful"])
    passed, qualifying = emotion_occurrence_filter(clip, CFG)
    assert passed and qualifying == {"fearful"}


def test_occurrence_ignores_unconfigured_categories():
    clip = clip_with("c", ["worry", "worry", "worry", "worry"])
    passed, _ = emotion_occurrence_filter(clip, CFG)
    assert not passed


# --- config -----------------------------------------------------------------


def test_interval_bounds_validated():
    with pytest.raises(ValueError):
        ValenceInterval(lo=-0.1, hi=0.5)
    with pytest.raises(ValueError):
        ValenceInterval(lo=0.9, hi=0.2)


def test_config_duration_order_validated():
    with pytest.raises(ValueError):
        CondenseConfig(duration_min=30.0, duration_max=20.0)


def test_config_roundtrip():
    cfg = CondenseConfig(target_language="zh", min_counts={"angry": 5})
    assert CondenseConfig.from_dict(cfg.to_dict()) == cfg


# --- corpus-level pipeline --------------------------------------------------


def ten_clip_corpus():
    """Hand-designed corpus; expected fate of each clip derived by hand."""
    return [
        clip_with("c01", ["angry"] * 3, [0.3, 0.2, 0.1]),                     # kept: 3 consistent angry
        clip_with("c02", ["angry"] * 3, [0.3, 0.2, 0.1], language="zh"),      # LANGUAGE
        clip_with("c03", ["angry"] * 3, [0.3, 0.2, 0.1], duration=15.0),      # DURATION (short)
        clip_with("c04", ["angry"] * 3, [0.3, 0.2, 0.1], duration=35.0),      # DURATION (long)
        clip_with("c05", ["happy"] * 3, [0.3, 0.3, 0.3]),                     # all relabeled -> OCCURRENCE
        clip_with("c06", ["angry"] * 2, [0.3, 0.2]),                          # 2 < 3 -> OCCURRENCE
        clip_with("c07", ["fearful"], [0.1]),                                 # kept: fearful minimum is 1
        clip_with("c08", ["sad", "sad", "happy"], [0.4, 0.45, 0.9]),          # kept: 2 sad qualify
        clip_with("c09", ["happy", "happy", "happy", "angry"], [0.8, 0.7, 0.9, 0.9]),  # kept, 1 relabel
        clip_with("c10", ["angry"] * 3, None),                                # kept: no dims, untouched
    ]


def test_condense_empty_input():
    selected, report = condense_corpus([], CFG)
    assert selected == [] and report.input_count == 0
    assert report.kept == [] and report.rejected == {}


def test_condense_duration_gate():
    clip = clip_with("short", ["angry"] * 3, [0.1, 0.1, 0.1], duration=15.0)
    _, report = condense_corpus([clip], CFG)
    assert report.rejected["short"] == DURATION


def test_condense_ten_clip_corpus():
    selected, report = condense_corpus(ten_clip_corpus(), CFG)
    assert [c.clip_id for c in selected] == ["c01", "c07", "c08", "c09", "c10"]
    assert report.kept == ["c01", "c07", "c08", "c09", "c10"]
    assert report.rejected == {
        "c02": LANGUAGE,
        "c03": DURATION,
        "c04": DURATION,
        "c05": OCCURRENCE,
        "c06": OCCURRENCE,
    }
    assert report.input_count == 10
    assert report.relabeled_neutral["c05"] == 3
    assert report.relabeled_neutral["c09"] == 1
    assert report.relabeled_neutral["c01"] == 0
    # Short-circuit order: clips rejected before the consistency stage never
    # appear in the relabel tally.
    assert "c02" not in report.relabeled_neutral
    assert "c03" not in report.relabeled_neutral
    assert report.qualification_counts == {"angry": 2, "fearful": 1, "sad": 1, "happy": 1}


def test_condense_report_accounts_exactly_once():
    clips = ten_clip_corpus()
    _, report = condense_corpus(clips, CFG)
    all_ids = {c.clip_id for c in clips}
    assert set(report.kept) | set(report.rejected) == all_ids
    assert set(report.kept) & set(report.rejected) == set()


def test_condense_idempotent():
    selected, _ = condense_corpus(ten_clip_corpus(), CFG)
    reselected, report = condense_corpus(selected, CFG)
    assert reselected == selected
    assert report.rejected == {}
    assert all(count == 0 for count in report.relabeled_neutral.values())


def test_consistency_preserves_window_count():
    for clip in ten_clip_corpus():
        assert len(ser_consistency_filter(clip, CFG).windows) == len(clip.windows)


# --- brute-force oracle -----------------------------------------------------

_BF_POLARITY = {
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
_BF_MINS = {"angry": 3, "happy": 3, "sad": 2, "surprised": 2, "disgusted": 1, "fearful": 1}


def brute_force_outcome(clip: ClipRecord) -> str:
    """Independent per-clip re-derivation of the default pipeline's verdict."""
    if clip.language.lower() != "en":
        return LANGUAGE
    if not 20.0 <= clip.duration <= 30.0:
        return DURATION
    categories = []
    for w in clip.windows:
        if w.dims is None:
            categories.append(w.category)
            continue
        v = w.dims.valence
        polarity = _BF_POLARITY[w.category]
        if polarity == "negative":
            consistent = 0.0 <= v < 0.5
        elif polarity == "positive":
            consistent = 0.5 < v <= 1.0
        else:
            consistent = 0.4 <= v <= 0.6
        categories.append(w.category if consistent else "neutral")
    counts = Counter(categories)
    if any(counts.get(c, 0) >= m for c, m in _BF_MINS.items()):
        return "KEPT"
    return OCCURRENCE


def random_corpus(n: int, seed: int) -> list[ClipRecord]:
    rng = random.Random(seed)
    vocabulary = sorted(DEFAULT_EMOTION_VOCABULARY)
    clips = []
    for i in range(n):
        categories = [rng.choice(vocabulary) for _ in range(rng.randint(0, 10))]
        windows = []
        for j, category in enumerate(categories):
            dims = None
            if rng.random() < 0.8:
                dims = DimScores(rng.random(), rng.random(), round(rng.random(), 3))
            windows.append(EmotionWindow(2.0 * j, 2.0 * (j + 1), category, dims=dims))
        clips.append(
            make_clip(
                clip_id=f"clip-{i:03d}",
                language=rng.choice(["en"] * 5 + ["zh"]),
                duration=round(rng.uniform(16.0, 34.0), 2),
                windows=tuple(windows),
            )
        )
    return clips


def test_condense_matches_brute_force_on_random_corpus():
    clips = random_corpus(50, seed=20240901)
    selected, report = condense_corpus(clips, CFG)
    expected_kept = [c.clip_id for c in clips if brute_force_outcome(c) == "KEPT"]
    assert report.kept == expected_kept
    assert [c.clip_id for c in selected] == expected_kept
    for clip in clips:
        verdict = brute_force_outcome(clip)
        if verdict == "KEPT":
            assert clip.clip_id not in report.rejected
        else:
            assert report.rejected[clip.clip_id] == verdict
    # Every selected clip re-checks as emotion-rich.
    for clip in selected:
        counts = Counter(w.category for w in clip.windows)
        assert any(counts.get(c, 0) >= m for c, m in _BF_MINS.items())
