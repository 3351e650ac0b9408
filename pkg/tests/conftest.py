"""Shared builders for synthetic clips and manifests."""

from __future__ import annotations

import pytest

from cpqa.corpus import ClipRecord, DimScores, EmotionWindow, WordToken
from cpqa.gateway import CharBigramEmbedding


def make_words(*specs: tuple[str, float, float]) -> tuple[WordToken, ...]:
    return tuple(WordToken(text=t, start=s, end=e) for t, s, e in specs)


def tiled_windows(
    categories: list[str],
    valences: list[float] | None = None,
    gender: str | None = None,
    start: float = 0.0,
) -> tuple[EmotionWindow, ...]:
    """Consecutive 2-second windows starting at ``start``.

    When valences are given, each window carries dims with arousal/dominance
    fixed at 0.5 and the requested valence.
    """
    windows = []
    for i, category in enumerate(categories):
        dims = None
        if valences is not None:
            dims = DimScores(arousal=0.5, dominance=0.5, valence=valences[i])
        windows.append(
            EmotionWindow(
                start=start + 2.0 * i,
                end=start + 2.0 * (i + 1),
                category=category,
                dims=dims,
                gender=gender,
            )
        )
    return tuple(windows)


def make_clip(
    clip_id: str = "clip-0001",
    language: str = "en",
    duration: float | None = None,
    words: tuple[WordToken, ...] = (),
    windows: tuple[EmotionWindow, ...] = (),
) -> ClipRecord:
    if duration is None:
        last_word = max((w.end for w in words), default=0.0)
        last_window = max((w.end for w in windows), default=0.0)
        duration = max(last_word, last_window, 1.0)
    return ClipRecord(
        clip_id=clip_id, language=language, duration=duration, words=words, windows=windows
    )


@pytest.fixture
def golden_clip() -> ClipRecord:
    """The clip frozen into the golden prompt files; do not change."""
    return make_clip(
        clip_id="clip-0001",
        language="en",
        duration=6.0,
        words=make_words(("I", 0.2, 0.5), ("left", 0.6, 1.1), ("home", 1.2, 1.8), ("yesterday", 2.2, 3.0)),
        windows=(
            EmotionWindow(0.0, 2.0, "sad", dims=DimScores(0.2, 0.3, 0.4), gender="male"),
            EmotionWindow(2.0, 4.0, "angry", dims=DimScores(0.7, 0.6, 0.3), gender="male"),
        ),
    )


@pytest.fixture
def bigram() -> CharBigramEmbedding:
    return CharBigramEmbedding()
