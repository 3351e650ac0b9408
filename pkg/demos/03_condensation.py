"""Condensing a corpus down to its emotion-rich clips.

Four stages run in a fixed order: language filter, 20-30 s duration gate,
valence-consistency relabeling, and the per-category occurrence filter.
Windows whose categorical polarity disagrees with their valence are
relabeled neutral (negative emotions expect valence in [0, 0.5), positive
in (0.5, 1.0], neutral in [0.4, 0.6]); a clip then survives only if some
category still reaches its minimum window count (angry 3, happy 3, sad 2,
surprised 2, disgusted 1, fearful 1 by default).
"""

import json

from cpqa import ClipRecord, CondenseConfig, DimScores, EmotionWindow, condense_corpus


def clip(clip_id, categories, valences, language="en", duration=25.0):
    windows = tuple(
        EmotionWindow(2.0 * i, 2.0 * (i + 1), cat, dims=DimScores(0.5, 0.5, val))
        for i, (cat, val) in enumerate(zip(categories, valences))
    )
    return ClipRecord(clip_id=clip_id, language=language, duration=duration, windows=windows)


corpus = [
    clip("keep-angry", ["angry", "angry", "angry"], [0.2, 0.1, 0.3]),
    clip("wrong-lang", ["angry", "angry", "angry"], [0.2, 0.1, 0.3], language="zh"),
    clip("too-short", ["angry", "angry", "angry"], [0.2, 0.1, 0.3], duration=12.0),
    # Happy labels with low valence are unreliable: relabeled neutral, then
    # the clip fails the occurrence filter.
    clip("implausible-happy", ["happy", "happy", "happy"], [0.2, 0.3, 0.1]),
    clip("one-fearful", ["fearful"], [0.1]),
]

selected, report = condense_corpus(corpus, CondenseConfig())

print("selected:", [c.clip_id for c in selected])
print("\nreport:")
print(json.dumps(report.to_dict(), indent=2))

# The pipeline is idempotent: condensing its own output keeps everything.
reselected, second = condense_corpus(selected, CondenseConfig())
print("\nidempotent:", [c.clip_id for c in reselected] == report.kept, "| re-rejections:", second.rejected)
