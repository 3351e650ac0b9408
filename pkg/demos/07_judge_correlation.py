"""Relating judge scores to classification correctness.

Judge scores (0-5, linearly rescaled to 0-100) are subjective; for
classification-style questions the estimated label gives an objective
correctness signal. Binning records by judge score shows whether the two
agree: the correct ratio should climb with the score.
"""

import random

from cpqa import EvalRecord, judge_correlation, rescale_judge_score

print("rescaling:", {s: rescale_judge_score(s) for s in range(6)})

# Synthetic evaluation: correctness probability rises with the judge score,
# mimicking a judge that mostly knows what it is doing.
rng = random.Random(11)
probability_by_score = {0: 0.05, 1: 0.2, 2: 0.4, 3: 0.6, 4: 0.8, 5: 0.95}

records = []
for score, probability in probability_by_score.items():
    for i in range(200):
        correct = rng.random() < probability
        records.append(
            EvalRecord(
                question_id=f"{score}-{i}",
                answer_text="(free-text answer)",
                reference_label="angry",
                estimated_label="angry" if correct else "sad",
                judge_score=score,
            )
        )

report = judge_correlation(records)
print(f"\nmean rescaled score: {report.mean_rescaled_score:.1f}\n")
print("score  count  correct  incorrect  correct-ratio")
for score in range(6):
    b = report.bins[score]
    ratio = "n/a" if b.correct_ratio is None else f"{b.correct_ratio:.2f}"
    bar = "#" * int((b.correct_ratio or 0) * 30)
    print(f"{score:>5}  {b.count:>5}  {b.correct:>7}  {b.incorrect:>9}  {ratio:>6}  {bar}")
