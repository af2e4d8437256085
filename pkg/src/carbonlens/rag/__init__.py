from carbonlens.rag.stages import (
    CotPreAnswer,
    IntentLabel,
    KeySentences,
    QueryPlan,
    classify_intent,
    extract_key_sentences,
    format_intent,
    parse_intent,
    pre_answer_cot,
    rewrite_query,
)
from carbonlens.rag.pipeline import AnswerBundle, PipelineDeps, PipelineOptions, run_pipeline

__all__ = [
    "CotPreAnswer",
    "IntentLabel",
    "KeySentences",
    "QueryPlan",
    "classify_intent",
    "extract_key_sentences",
    "format_intent",
    "parse_intent",
    "pre_answer_cot",
    "rewrite_query",
    "AnswerBundle",
    "PipelineDeps",
    "PipelineOptions",
    "run_pipeline",
]
