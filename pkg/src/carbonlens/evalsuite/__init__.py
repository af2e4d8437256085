from carbonlens.evalsuite.rouge import rouge_l, rouge_n
from carbonlens.evalsuite.bertscore import bertscore
from carbonlens.evalsuite.sqlmetrics import sql_exact_match, sql_execution_accuracy
from carbonlens.evalsuite.judge import relevance_judge
from carbonlens.evalsuite.ablation import (
    ABLATION_CONFIGS,
    AblationConfig,
    EvalScores,
    run_ablation,
    score_pair,
)

__all__ = [
    "rouge_l",
    "rouge_n",
    "bertscore",
    "sql_exact_match",
    "sql_execution_accuracy",
    "relevance_judge",
    "ABLATION_CONFIGS",
    "AblationConfig",
    "EvalScores",
    "run_ablation",
    "score_pair",
]
