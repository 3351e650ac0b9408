"""Dataset factory and evaluation harness for contextual-paralinguistic QA.

The toolkit condenses emotion-annotated speech metadata into emotion-rich
clip sets, renders QA-generation and metadata-augmented prompts, orchestrates
LLM calls to produce QA pairs, and scores free-text answers with keyword plus
embedding-similarity label estimation and weighted classification metrics.
"""

from .alignment import AlignedWord, align_words, window_for_time
from .condense import (
    CondenseConfig,
    CondenseReport,
    ValenceInterval,
    condense_corpus,
    emotion_occurrence_filter,
    language_filter,
    polarity_of,
    ser_consistency_filter,
)
from .corpus import (
    DEFAULT_EMOTION_VOCABULARY,
    ClipRecord,
    DimScores,
    EmotionWindow,
    ManifestDiagnostic,
    QAPair,
    Violation,
    WordToken,
    load_clip_manifest,
    load_qa_manifest,
    validate_clip,
    validate_qa_pair,
    write_clip_manifest,
    write_qa_manifest,
)
from .extract import ParseDiagnostic, ValidationRuleSet, parse_qa_pairs, validate_qa
from .gateway import (
    BatchOutcome,
    CharBigramEmbedding,
    ChatRequest,
    EmbeddingVector,
    HttpChatProvider,
    HttpEmbeddingProvider,
    ProviderError,
    RetryableProviderError,
    ScriptedChatProvider,
    batch_generate,
)
from .metrics import (
    EvalRecord,
    JudgeCorrelationReport,
    LabelSet,
    cosine,
    estimate_label,
    evaluate_records,
    judge_correlation,
    keyword_match,
    load_eval_records,
    rescale_judge_score,
    weighted_accuracy,
    weighted_f1,
    write_eval_records,
)
from .prompts import (
    GenerationMode,
    augment_question_with_metadata,
    build_qa_generation_prompt,
    format_emotion_labels,
    template_checksums,
)

__version__ = "0.1.0"

__all__ = [
    "AlignedWord",
    "BatchOutcome",
    "CharBigramEmbedding",
    "ChatRequest",
    "ClipRecord",
    "CondenseConfig",
    "CondenseReport",
    "DEFAULT_EMOTION_VOCABULARY",
    "DimScores",
    "EmbeddingVector",
    "EmotionWindow",
    "EvalRecord",
    "GenerationMode",
    "HttpChatProvider",
    "HttpEmbeddingProvider",
    "JudgeCorrelationReport",
    "LabelSet",
    "ManifestDiagnostic",
    "ParseDiagnostic",
    "ProviderError",
    "QAPair",
    "RetryableProviderError",
    "ScriptedChatProvider",
    "ValenceInterval",
    "ValidationRuleSet",
    "Violation",
    "WordToken",
    "align_words",
    "augment_question_with_metadata",
    "batch_generate",
    "build_qa_generation_prompt",
    "condense_corpus",
    "cosine",
    "emotion_occurrence_filter",
    "estimate_label",
    "evaluate_records",
    "format_emotion_labels",
    "judge_correlation",
    "keyword_match",
    "language_filter",
    "load_clip_manifest",
    "load_eval_records",
    "load_qa_manifest",
    "parse_qa_pairs",
    "polarity_of",
    "rescale_judge_score",
    "ser_consistency_filter",
    "template_checksums",
    "validate_clip",
    "validate_qa",
    "validate_qa_pair",
    "weighted_accuracy",
    "weighted_f1",
    "window_for_time",
    "write_clip_manifest",
    "write_eval_records",
    "write_qa_manifest",
]
