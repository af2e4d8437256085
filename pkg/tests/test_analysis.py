"""14-dimension report analysis: summaries, scores, profile, assembly."""

import json

import pytest

from carbonlens.analysis.dimensions import AnalysisDimension, load_dimensions
from carbonlens.analysis.engine import (
    INSUFFICIENT_DISCLOSURE,
    AnalysisDeps,
    CompanyProfile,
    ComplianceAssessment,
    DimensionAnswer,
    assemble_report,
    evaluate_compliance,
    get_company_profile,
    parse_score,
    summarize_report,
)
from carbonlens.errors import ConfigError, ProfileParseError
from carbonlens.ingest.blocks import read_blocks_jsonl
from carbonlens.ingest.chunkers import ChunkingPolicy, chunk_document
from carbonlens.llm.provider import ScriptedProvider
from carbonlens.retrieval.embedder import HashingEmbedder
from carbonlens.retrieval.fusion import index_chunks

from .conftest import FIXTURES, scripted


@pytest.fixture(scope="module")
def report_indexes():
    doc = read_blocks_jsonl((FIXTURES / "corpus" / "report_glacier.jsonl").read_text("utf-8"))
    chunks = chunk_document(doc, ChunkingPolicy(strategy="document_tree"))
    return index_chunks(chunks, HashingEmbedder())


@pytest.fixture(scope="module")
def report_provider():
    return ScriptedProvider.from_file(FIXTURES / "provider" / "report_analysis.json")


@pytest.fixture()
def deps(report_indexes, report_provider):
    return AnalysisDeps(
        indexes=report_indexes,
        provider=report_provider,
        doc_titles={"glacier_2023": "Glacier Networks Sustainability Report 2023"},
    )


def test_dimension_registry_has_exactly_14_unique():
    dims = load_dimensions()
    assert len(dims) == 14
    assert [d.id for d in dims] == [f"GHG_{i}" for i in range(1, 15)]


def test_summarize_report_14_answers_citations_resolve(deps, report_indexes):
    answers = summarize_report(deps)
    assert len(answers) == 14
    for answer in answers:
        for cite in answer.evidence:
            assert cite["chunk_id"] in report_indexes.chunks


def test_ghg12_fabricated_claim_marked_and_corrected(deps):
    answers = summarize_report(deps)
    a12 = next(a for a in answers if a.dimension_id == "GHG_12")
    assert a12.hallucination_marks, "fabricated trading-scheme claim must be marked"
    quoted = " ".join(m["quoted_text"] for m in a12.hallucination_marks)
    assert "internal trials" in quoted
    corrected = a12.hallucination_marks[0]["corrected_text"]
    assert corrected is not None
    assert "internal trials" not in corrected


def test_grounded_summaries_produce_no_marks(deps):
    answers = summarize_report(deps)
    for answer in answers:
        if answer.dimension_id == "GHG_12":
            continue
        assert answer.hallucination_marks == [], answer.dimension_id


def test_dimension_with_no_hits_gets_insufficient_disclosure(report_indexes, report_provider):
    nonsense = AnalysisDimension(
        id="GHG_1",
        title="Unrelated",
        guideline_text="zzqx unmatched guideline",
        seed_queries=("zzqx qwvk bbnm",),
    )
    deps = AnalysisDeps(
        indexes=report_indexes,
        provider=report_provider,
        dimensions=[nonsense] + load_dimensions()[1:],
    )
    answers = summarize_report(deps)
    first = answers[0]
    assert first.analysis == INSUFFICIENT_DISCLOSURE
    assert first.evidence == []
    assert "no_retrieval_hits" in first.flags


def test_evaluate_compliance_scores_parsed(deps):
    assessments = evaluate_compliance(deps)
    assert len(assessments) == 14
    by_id = {a.dimension_id: a for a in assessments}
    assert by_id["GHG_4"].score == 85
    assert all(a.score is not None and 0 <= a.score <= 100 for a in assessments)


def test_parse_score_variants():
    assert parse_score("analysis...\nScore4: 85") == (85, [])
    assert parse_score("Score: 150") == (100, ["score_clamped"])
    assert parse_score("Score: -3") == (0, ["score_clamped"])
    assert parse_score("no score here") == (None, ["ScoreParseError"])


def test_score_bounds_hold_for_random_provider_outputs(report_indexes):
    import random

    rng = random.Random(7)
    for _ in range(50):
        raw = f"analysis\nScore{rng.randint(1, 14)}: {rng.randint(-500, 500)}"
        score, _flags = parse_score(raw)
        assert score is None or 0 <= score <= 100


def test_get_company_profile(deps):
    profile = get_company_profile(deps)
    assert profile.name == "Glacier Networks"
    assert profile.report_year == 2023
    assert profile.scopes_reported == ["Scope1", "Scope2", "Scope3"]


def test_profile_malformed_json_raises(report_indexes):
    provider = scripted([{"contains": "corporate disclosure analyst", "response": "not json"}])
    deps = AnalysisDeps(indexes=report_indexes, provider=provider)
    with pytest.raises(ProfileParseError):
        get_company_profile(deps)


def test_profile_missing_year_flagged(report_indexes):
    provider = scripted(
        [{"contains": "corporate disclosure analyst", "response": '{"name": "X"}'}]
    )
    deps = AnalysisDeps(indexes=report_indexes, provider=provider)
    profile = get_company_profile(deps)
    assert profile.report_year is None
    assert "missing_year" in profile.flags


def test_assemble_report_structure_and_determinism(deps):
    answers = summarize_report(deps)
    assessments = evaluate_compliance(deps)
    profile = get_company_profile(deps)
    doc1 = assemble_report("glacier_2023", answers, assessments, profile, deps.dimensions,
                           metadata={"generated_at": "2024-06-01T00:00:00Z", "provider": "scripted"})
    doc2 = assemble_report("glacier_2023", answers, assessments, profile, deps.dimensions,
                           metadata={"generated_at": "2024-06-01T00:00:00Z", "provider": "scripted"})
    assert doc1.to_json() == doc2.to_json()
    assert len(doc1.entries) == 14
    assert [e["dimension_id"] for e in doc1.entries] == [f"GHG_{i}" for i in range(1, 15)]
    md = doc1.to_markdown()
    assert "GHG_12" in md and "85/100" in md


def test_assemble_report_missing_assessment_noted_no_crash(deps):
    answers = summarize_report(deps)
    assessments = evaluate_compliance(deps)[:-1]  # drop GHG_14
    profile = CompanyProfile(name="X")
    doc = assemble_report("glacier_2023", answers, assessments, profile, deps.dimensions)
    last = doc.entries[-1]
    assert last["score"] is None
    assert "missing_assessment" in last["flags"]


# -- customized questions -------------------------------------------------------


def _custom_pipeline_deps(report_indexes, extra_script, sql=None):
    from carbonlens.rag.pipeline import PipelineDeps

    return PipelineDeps(
        indexes=report_indexes,
        provider=scripted(extra_script),
        doc_titles={"glacier_2023": "Glacier Networks Sustainability Report 2023"},
        sql=sql,
    )


def _custom_script(question, answer, intent="Related to policy"):
    return [
        {"contains_all": ["carbon emission policies", question], "response": intent},
        {
            "contains_all": ["output requirements step by step", question],
            "response": f"1. {question}\n2.\n3. {question}\n4. {question}",
        },
        {"contains_all": ["senior scholar", question], "response": f"Background: {question}"},
        {"contains": "Extract key sentences", "response": ""},
        {"contains_all": ["The candidate information is as follows", question], "response": answer},
    ]


def test_answer_custom_question_golden(report_indexes):
    from carbonlens.analysis.engine import answer_custom_question

    question = "What is the company's net zero target year?"
    answer = (
        "The company targets net-zero across the value chain by 2040 with an accelerated "
        "2030 milestone for its own operations, and progress is reviewed twice a year."
    )
    deps = _custom_pipeline_deps(report_indexes, _custom_script(question, answer))
    result = answer_custom_question(question, deps)
    assert result.dimension_id == "custom"
    assert result.analysis == answer
    assert result.evidence, "citations must accompany a grounded custom answer"
    assert result.hallucination_marks == []


def test_answer_custom_question_off_report_insufficient_disclosure(report_indexes):
    from carbonlens.analysis.engine import answer_custom_question

    question = "What is the cafeteria menu on Mondays?"
    deps = _custom_pipeline_deps(report_indexes, _custom_script(question, ""))
    result = answer_custom_question(question, deps)
    assert result.analysis == INSUFFICIENT_DISCLOSURE
    assert result.evidence == []
    assert "no_retrieval_hits" in result.flags


def test_answer_custom_question_requires_query_attaches_sql(report_indexes):
    from datetime import date

    from carbonlens.analysis.engine import answer_custom_question
    from carbonlens.nl2sql.catalog import load_catalog, load_data_store
    from carbonlens.nl2sql.service import SqlDeps

    question = "How many facilities does each company have?"
    script = _custom_script(question, "", intent="Requires query") + [
        {
            "contains_all": ["As a MySQL expert", question],
            "response": "SELECT company, count(*) AS n FROM facilities GROUP BY company ORDER BY company ASC",
        }
    ]
    catalog = load_catalog(FIXTURES / "sql" / "schema")
    sql = SqlDeps(
        catalog=catalog,
        store=load_data_store(FIXTURES / "sql" / "data", catalog),
        provider=scripted(script),
        now=date(2024, 3, 2),
    )
    deps = _custom_pipeline_deps(report_indexes, script, sql=sql)
    result = answer_custom_question(question, deps)
    assert result.sql is not None
    assert result.sql["result"]["rows"] == [["AcmeSteel", 2], ["GreenVolt", 1], ["NordicFoods", 2]]


def test_fewshot_examples_parse_and_validate():
    from carbonlens.nl2sql.catalog import load_catalog
    from carbonlens.nl2sql.fewshot import FewShotStore
    from carbonlens.nl2sql.parser import parse_sql
    from carbonlens.nl2sql.validate import validate_sql

    catalog = load_catalog(FIXTURES / "sql" / "schema")
    store = FewShotStore.from_file(FIXTURES / "sql" / "fewshot.json")
    assert store.examples
    for example in store.examples:
        report = validate_sql(parse_sql(example.sql), catalog)
        assert report.passed, (example.question, report.violations)
