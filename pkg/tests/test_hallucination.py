"""Two-layer hallucination screening."""

import pytest

from carbonlens.analysis.hallucination import (
    detect_hallucinations,
    screen_answer,
    sentence_support,
)

from .conftest import scripted

EVIDENCE = [
    "The company reduced Scope 1 emissions by upgrading its furnaces. "
    "Renewable electricity reached 35 percent of purchased energy in 2023. "
    "Suppliers committed to science-based reduction targets."
]


def test_verbatim_sentence_not_marked():
    answer = "The company reduced Scope 1 emissions by upgrading its furnaces."
    marks = screen_answer(answer, EVIDENCE)
    assert marks == []


def test_injected_unsupported_sentence_marked():
    answer = (
        "The company reduced Scope 1 emissions by upgrading its furnaces. "
        "The company operates a research base on Mars."
    )
    marks = screen_answer(answer, EVIDENCE)
    assert len(marks) == 1
    assert "Mars" in marks[0].quoted_text


def test_novel_number_always_marked_even_with_overlap():
    answer = "Renewable electricity reached 99 percent of purchased energy in 2023."
    marks = screen_answer(answer, EVIDENCE)
    assert len(marks) == 1
    assert "99" in marks[0].reason


def test_mark_quoted_text_equals_answer_span():
    answer = (
        "Suppliers committed to science-based reduction targets. "
        "Unrelated fabricated claim about offshore mining."
    )
    marks = screen_answer(answer, EVIDENCE)
    assert len(marks) == 1
    s, e = marks[0].span
    assert answer[s:e] == marks[0].quoted_text


def test_support_is_max_over_evidence_sentences():
    assert sentence_support("Suppliers committed to science-based reduction targets.",
                            ["irrelevant words", "Suppliers committed to science-based reduction targets."]) == 1.0


def test_detection_outcome_corrected_answer_drops_marked():
    answer = (
        "The company reduced Scope 1 emissions by upgrading its furnaces. "
        "The company operates a research base on Mars."
    )
    out = detect_hallucinations(answer, EVIDENCE, provider=None)
    assert len(out.marks) == 1
    assert "Mars" not in out.corrected_answer
    assert "furnaces" in out.corrected_answer


def test_provider_adjudication_sections_parsed():
    answer = (
        "Suppliers committed to science-based reduction targets. "
        "The company runs internal emission trading scheme trials."
    )
    adjudication = (
        "[Hallucination Mark]: The trading scheme trials claim is not in the report. "
        "[Corrected Response]: Suppliers committed to science-based reduction targets. "
        "[Reason Explanation]: No mention of trading scheme trials in the report content."
    )
    provider = scripted([{"contains": "document verification assistant", "response": adjudication}])
    out = detect_hallucinations(answer, EVIDENCE, provider=provider)
    assert len(out.marks) == 1
    assert out.corrected_answer == "Suppliers committed to science-based reduction targets."
    assert out.marks[0].corrected_text == out.corrected_answer
    assert "adjudicated" in out.flags


def test_provider_parse_failure_keeps_deterministic_marks():
    answer = "Completely fabricated unsupported sentence about dragons."
    provider = scripted([{"contains": "document verification assistant", "response": "gibberish"}])
    out = detect_hallucinations(answer, EVIDENCE, provider=provider)
    assert len(out.marks) == 1
    assert "adjudication_unparseable" in out.flags


def test_empty_answer_rejected():
    with pytest.raises(ValueError):
        detect_hallucinations("", EVIDENCE)


def test_sql_result_numbers_count_as_grounding():
    answer = "Total output was 325 tonnes."
    marks = screen_answer(answer, EVIDENCE, sql_result_text="[['AcmeSteel', 325.0]]")
    novel_number_marks = [m for m in marks if "numbers" in m.reason]
    assert novel_number_marks == []
