"""CLI surface smoke tests."""

import json

import pytest
from click.testing import CliRunner

from carbonlens.cli import main

from .conftest import FIXTURES


@pytest.fixture()
def runner():
    return CliRunner()


def test_ingest_then_ask(runner, tmp_path):
    store = tmp_path / "store"
    result = runner.invoke(
        main,
        [
            "ingest",
            "--input", str(FIXTURES / "corpus" / "policy_carbon_market.jsonl"),
            "--store", str(store),
            "--strategy", "tree",
        ],
    )
    assert result.exit_code == 0, result.output
    payload = json.loads(result.output)
    assert payload["doc_id"] == "policy_ets_2024"
    assert payload["chunk_count"] > 0
    assert (store / "index" / "meta.json").exists()

    result = runner.invoke(
        main,
        [
            "ask",
            "How are carbon allowances handed out?",
            "--index", str(store),
            "--provider", f"scripted:{FIXTURES / 'provider' / 'ablation.json'}",
        ],
    )
    assert result.exit_code == 0, result.output
    bundle = json.loads(result.output)
    assert bundle["answer"]
    assert bundle["citations"]


def test_ingest_duplicate_fails_cleanly(runner, tmp_path):
    store = tmp_path / "store"
    args = [
        "ingest",
        "--input", str(FIXTURES / "corpus" / "policy_carbon_market.jsonl"),
        "--store", str(store),
    ]
    assert runner.invoke(main, args).exit_code == 0
    result = runner.invoke(main, args)
    assert result.exit_code != 0
    assert "identical content" in result.output


def test_ingest_rules_strategy(runner, tmp_path):
    rules = tmp_path / "rules.txt"
    rules.write_text("Article \\d+\n", "utf-8")
    result = runner.invoke(
        main,
        [
            "ingest",
            "--input", str(FIXTURES / "corpus" / "policy_carbon_market.jsonl"),
            "--store", str(tmp_path / "store"),
            "--strategy", "rules",
            "--rules", str(rules),
        ],
    )
    assert result.exit_code == 0, result.output
    assert json.loads(result.output)["chunk_count"] >= 9  # one chunk per article


def test_sql_ask_cli(runner):
    result = runner.invoke(
        main,
        [
            "sql", "ask",
            "How many facilities does each company have?",
            "--catalog", str(FIXTURES / "sql" / "schema"),
            "--data", str(FIXTURES / "sql" / "data"),
            "--provider", f"scripted:{FIXTURES / 'provider' / 'server.json'}",
        ],
    )
    assert result.exit_code == 0, result.output
    payload = json.loads(result.output)
    assert payload["validation"]["verdict"] == "pass"
    assert payload["result"]["rows"] == [["AcmeSteel", 2], ["GreenVolt", 1], ["NordicFoods", 2]]


def test_sql_ask_no_execute_flag(runner):
    result = runner.invoke(
        main,
        [
            "sql", "ask",
            "How many facilities does each company have?",
            "--catalog", str(FIXTURES / "sql" / "schema"),
            "--data", str(FIXTURES / "sql" / "data"),
            "--provider", f"scripted:{FIXTURES / 'provider' / 'server.json'}",
            "--no-execute",
        ],
    )
    assert result.exit_code == 0, result.output
    payload = json.loads(result.output)
    assert payload["result"] is None
    assert "execution_skipped" in payload["flags"]


def test_eval_cli_markdown(runner, tmp_path):
    out = tmp_path / "table.md"
    result = runner.invoke(
        main,
        [
            "eval",
            "--dataset", str(FIXTURES / "qa" / "qa25.jsonl"),
            "--corpus", str(FIXTURES / "corpus" / "policy_carbon_market.jsonl"),
            "--corpus", str(FIXTURES / "corpus" / "report_glacier.jsonl"),
            "--provider", f"scripted:{FIXTURES / 'provider' / 'ablation.json'}",
            "--configs", "standard_rag,self_prompting_rag",
            "--out", str(out),
        ],
    )
    assert result.exit_code == 0, result.output
    table = out.read_text("utf-8")
    assert table.startswith("| Method |")
    assert "standard_rag" in table and "self_prompting_rag" in table


def test_analyze_cli_markdown(runner, tmp_path):
    store = tmp_path / "store"
    assert (
        runner.invoke(
            main,
            [
                "ingest",
                "--input", str(FIXTURES / "corpus" / "report_glacier.jsonl"),
                "--store", str(store),
            ],
        ).exit_code
        == 0
    )
    out = tmp_path / "report.md"
    result = runner.invoke(
        main,
        [
            "analyze",
            "--report", "glacier_2023",
            "--store", str(store),
            "--provider", f"scripted:{FIXTURES / 'provider' / 'report_analysis.json'}",
            "--out", str(out),
        ],
    )
    assert result.exit_code == 0, result.output
    text = out.read_text("utf-8")
    assert "GHG_14" in text
    assert "Glacier Networks" in text
