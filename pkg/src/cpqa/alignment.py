"""Attach each word to the emotion/gender window covering its midpoint.

Windows are half-open intervals [start, end), so 2-second tilings partition
time without boundary overlap. A word is matched by its temporal midpoint;
words no window covers fall back to a neutral category with no dimensional
scores or gender.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from typing import Sequence

from .corpus import NEUTRAL, DimScores, EmotionWindow, WordToken


@dataclass(frozen=True)
class AlignedWord:
    """A word plus the paralinguistic labels of its matching window."""

    word: WordToken
    category: str = NEUTRAL
    dims: DimScores | None = None
    gender: str | None = None


def window_for_time(t: float, windows: Sequence[EmotionWindow]) -> EmotionWindow | None:
    """Return the window with start <= t < end, or None.

    Expects windows sorted by start and non-overlapping, as ClipRecord
    guarantees.
    """
    idx = bisect_right([w.start for w in windows], t) - 1
    if idx >= 0 and windows[idx].covers(t):
        return windows[idx]
    return None


def align_words(
    words: Sequence[WordToken], windows: Sequence[EmotionWindow]
) -> list[AlignedWord]:
    """Produce one AlignedWord per input word, in order."""
    starts = [w.start for w in windows]
    aligned = []
    for word in words:
        idx = bisect_right(starts, word.midpoint) - 1
        if idx >= 0 and windows[idx].covers(word.midpoint):
            win = windows[idx]
            aligned.append(AlignedWord(word=word, category=win.category, dims=win.dims, gender=win.gender))
        else:
            aligned.append(AlignedWord(word=word))
    return aligned
