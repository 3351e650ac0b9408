"""The full QA-generation loop with a scripted (bit-reproducible) provider.

clips -> prompts -> batched chat calls -> Q:/A: parsing -> quality rules.
The scripted provider maps request ids to canned responses, which makes the
whole pipeline deterministic; swap in HttpChatProvider for a real endpoint.
"""

from cpqa import (
    ChatRequest,
    ClipRecord,
    DimScores,
    EmotionWindow,
    ScriptedChatProvider,
    ValidationRuleSet,
    WordToken,
    align_words,
    batch_generate,
    build_qa_generation_prompt,
    parse_qa_pairs,
    validate_qa,
)

clips = [
    ClipRecord(
        clip_id=f"clip-{i}",
        language="en",
        duration=22.0,
        words=(WordToken("we", 0.1, 0.3), WordToken("won", 0.4, 0.9)),
        windows=(EmotionWindow(0.0, 2.0, "happy", dims=DimScores(0.7, 0.6, 0.9)),),
    )
    for i in range(3)
]

provider = ScriptedChatProvider(
    {
        "clip-0": (
            "Q: What is the primary emotion in the audio clip?\n"
            "A: The speaker sounds genuinely happy.\n"
            "Q: Why does the speaker cheer?\n"
            "A: They just won something important."
        ),
        # One-word answers violate the generation rules -> quarantined.
        "clip-1": "Q: What emotion is expressed?\nA: happy",
        # Referencing the transcript is forbidden -> quarantined.
        "clip-2": "Q: According to the transcript, who won?\nA: The speaker's team won.",
    }
)

requests = [
    ChatRequest(
        prompt=build_qa_generation_prompt(clip, align_words(clip.words, clip.windows)),
        request_id=clip.clip_id,
    )
    for clip in clips
]

outcomes = batch_generate(provider, requests, parallelism=2)
rules = ValidationRuleSet()

accepted, quarantined = [], []
for clip in clips:
    outcome = outcomes[clip.clip_id]
    pairs, diagnostics = parse_qa_pairs(outcome.text, clip.clip_id)
    for pair in pairs:
        reasons = validate_qa(pair, rules)
        (quarantined if reasons else accepted).append((pair, reasons))

print(f"accepted {len(accepted)}, quarantined {len(quarantined)}\n")
for pair, _ in accepted:
    print(f"[{pair.clip_id}] Q: {pair.question}")
    print(f"{' ' * (len(pair.clip_id) + 2)} A: {pair.answer}")
print()
for pair, reasons in quarantined:
    print(f"[{pair.clip_id}] rejected {reasons}: {pair.question!r} / {pair.answer!r}")
