"""Rendering the QA-generation prompt and augmenting questions with metadata.

All fixed wording is stored in checksummed template assets; rendering only
fills the utterance and per-word metadata slots. The paralinguistic-only
variant (pqa-star) drops the contextual example questions. Question
augmentation appends two fixed instructions, with the time-stamped emotion
labels substituted into the first.
"""

from cpqa import (
    ClipRecord,
    DimScores,
    EmotionWindow,
    GenerationMode,
    WordToken,
    align_words,
    augment_question_with_metadata,
    build_qa_generation_prompt,
    format_emotion_labels,
    template_checksums,
)

clip = ClipRecord(
    clip_id="demo",
    language="en",
    duration=6.0,
    words=(WordToken("I", 0.2, 0.5), WordToken("left", 0.6, 1.1), WordToken("home", 1.2, 1.8)),
    windows=(EmotionWindow(0.0, 2.0, "sad", dims=DimScores(0.2, 0.3, 0.4), gender="male"),),
)
aligned = align_words(clip.words, clip.windows)

cpqa_prompt = build_qa_generation_prompt(clip, aligned, GenerationMode.CPQA)
pqa_prompt = build_qa_generation_prompt(clip, aligned, GenerationMode.PQA_STAR)

print("== full prompt, last lines ==")
print("\n".join(cpqa_prompt.splitlines()[-3:]))

removed = set(cpqa_prompt.splitlines()) - set(pqa_prompt.splitlines())
print("\n== lines removed in pqa-star mode ==")
for line in sorted(removed):
    print(line)

# Time-stamped emotion labels: neutral windows are omitted, and unlabeled
# time is declared neutral by the appended instructions.
windows = (
    EmotionWindow(2.0, 4.0, "sad"),
    EmotionWindow(10.0, 12.0, "angry"),
    EmotionWindow(12.0, 14.0, "angry"),
)
print("\n== emotion label string ==")
print(format_emotion_labels(windows))

print("\n== augmented question ==")
print(augment_question_with_metadata("Why is the man angry?", windows))

print("\n== template checksums ==")
for name, digest in template_checksums().items():
    print(f"{digest[:16]}...  {name}")
