from carbonlens.analysis.dimensions import AnalysisDimension, load_dimensions
from carbonlens.analysis.hallucination import HallucinationMark, detect_hallucinations
from carbonlens.analysis.engine import (
    AnalysisDeps,
    AnalysisReportDocument,
    ComplianceAssessment,
    CompanyProfile,
    DimensionAnswer,
    answer_custom_question,
    assemble_report,
    evaluate_compliance,
    get_company_profile,
    summarize_report,
)

__all__ = [
    "AnalysisDimension",
    "load_dimensions",
    "HallucinationMark",
    "detect_hallucinations",
    "AnalysisDeps",
    "AnalysisReportDocument",
    "ComplianceAssessment",
    "CompanyProfile",
    "DimensionAnswer",
    "answer_custom_question",
    "assemble_report",
    "evaluate_compliance",
    "get_company_profile",
    "summarize_report",
]
