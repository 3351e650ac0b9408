"""Attaching words to emotion/gender windows by temporal midpoint.

Windows are half-open intervals [start, end), so 2-second tilings partition
time cleanly. A word belongs to the window containing its midpoint; words
outside every window fall back to neutral with no dims or gender.
"""

from cpqa import DimScores, EmotionWindow, WordToken, align_words, window_for_time

windows = (
    EmotionWindow(2.0, 4.0, "sad", dims=DimScores(0.4, 0.4, 0.3), gender="female"),
    EmotionWindow(4.0, 6.0, "angry", dims=DimScores(0.8, 0.7, 0.2), gender="female"),
)

# Boundary behavior: t = 4.0 belongs to the second window, not the first.
for t in (3.0, 4.0, 9.0):
    hit = window_for_time(t, windows)
    print(f"t={t}: {hit.category if hit else 'no window'}")

words = (
    WordToken("everything", 2.5, 3.5),   # midpoint 3.0 -> sad
    WordToken("changed", 3.5, 4.5),      # midpoint 4.0 -> angry (half-open boundary)
    WordToken("afterwards", 8.0, 8.5),   # midpoint 8.25 -> uncovered, neutral
)

print()
for item in align_words(words, windows):
    dims = item.dims.as_list() if item.dims else None
    print(f"{item.word.text:12s} midpoint={item.word.midpoint:<5} -> {item.category:8s} dims={dims}")
