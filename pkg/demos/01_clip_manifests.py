"""Clip records, validation, and the line-delimited manifest format.

A clip record bundles everything the pipeline knows about one audio clip:
word-level transcription with timestamps, and 2-second emotion/gender
windows carrying a categorical label plus optional dimensional scores
[arousal, dominance, valence].
"""

import json
import tempfile
from pathlib import Path

from cpqa import (
    ClipRecord,
    DimScores,
    EmotionWindow,
    WordToken,
    load_clip_manifest,
    validate_clip,
    write_clip_manifest,
)

clip = ClipRecord(
    clip_id="example-001",
    language="en",
    duration=24.0,
    words=(
        WordToken("I", 0.2, 0.5),
        WordToken("missed", 0.6, 1.1),
        WordToken("the", 1.2, 1.4),
        WordToken("train", 1.5, 2.1),
    ),
    windows=(
        EmotionWindow(0.0, 2.0, "sad", dims=DimScores(0.4, 0.3, 0.2), gender="male"),
        EmotionWindow(2.0, 4.0, "angry", dims=DimScores(0.8, 0.7, 0.1), gender="male"),
    ),
)

print("validation of a clean record:", validate_clip(clip) or "ok")

# Invariants are reported with machine-readable codes, never exceptions.
broken = ClipRecord(
    clip_id="example-002",
    language="en",
    duration=10.0,
    windows=(EmotionWindow(0.0, 2.0, "happy", dims=DimScores(0.5, 0.5, 1.2)),),
)
for violation in validate_clip(broken):
    print("violation:", violation)

# Manifests are one JSON object per line so corpora stream without loading
# whole files. Round-trips are exact.
with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "clips.jsonl"
    write_clip_manifest([clip], path)
    print("\nmanifest line:")
    print(path.read_text().strip())

    reloaded, diagnostics = load_clip_manifest(path)
    print("\nround-trip equal:", reloaded == [clip])

    # Malformed lines become per-line diagnostics instead of crashes.
    with open(path, "a", encoding="utf-8") as fh:
        fh.write(json.dumps({"language": "en"}) + "\n")
    reloaded, diagnostics = load_clip_manifest(path)
    print("records:", len(reloaded), "| diagnostics:", [(d.line_no, d.reason) for d in diagnostics])
