"""Recovering classification labels from free-text answers, then scoring them.

Estimation is two-step: whole-word keyword matching over the ordered label
set, then a cosine argmax over label embeddings when no keyword hits. The
character-bigram embedding used here is deterministic and dependency-free;
production runs plug in a sentence-embedding provider through the same
interface.
"""

from cpqa import (
    CharBigramEmbedding,
    EvalRecord,
    LabelSet,
    cosine,
    estimate_label,
    keyword_match,
    weighted_accuracy,
    weighted_f1,
)

labels = LabelSet(("angry", "happy", "sad", "surprised"))
embed = CharBigramEmbedding().embed

answers = [
    "The speaker is clearly angry about the delay.",   # keyword hit
    "I would say the speaker sounds sad and tired.",   # keyword hit
    "A joyful and upbeat tone throughout.",            # no keyword -> embedding fallback
    "Startled, almost jumping at the noise.",          # no keyword -> embedding fallback
]

for answer in answers:
    hit = keyword_match(answer, labels)
    estimated = estimate_label(answer, labels, embed)
    route = "keyword" if hit else "embedding"
    print(f"{estimated:10s} ({route}) <- {answer}")

# The fallback is a brute-force cosine argmax over the label embeddings.
answer_vec = embed("A joyful and upbeat tone throughout.")
print("\nfallback similarities:")
for label in labels:
    print(f"  {label:10s} {cosine(embed(label), answer_vec):+.4f}")

# Metrics over estimated vs reference labels. Weighted accuracy is overall
# accuracy; weighted F1 averages per-class F1 by reference support.
references = ["angry", "sad", "happy", "surprised"]
records = [
    EvalRecord(
        question_id=f"q{i}",
        answer_text=answer,
        reference_label=reference,
        estimated_label=estimate_label(answer, labels, embed),
    )
    for i, (answer, reference) in enumerate(zip(answers, references))
]
print(f"\nweighted accuracy: {weighted_accuracy(records):.3f}")
print(f"weighted F1:       {weighted_f1(records):.3f}")
