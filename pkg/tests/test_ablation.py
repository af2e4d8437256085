"""Ablation harness: config lattice, table shape, metric movement."""

import pytest

from carbonlens.errors import EmptyDataset
from carbonlens.evalsuite.ablation import (
    ABLATION_CONFIGS,
    AblationDeps,
    load_dataset,
    render_csv,
    render_markdown,
    run_ablation,
)
from carbonlens.ingest.blocks import read_blocks_jsonl
from carbonlens.llm.provider import ScriptedProvider

from .conftest import FIXTURES


@pytest.fixture(scope="module")
def documents():
    return [
        read_blocks_jsonl((FIXTURES / "corpus" / "policy_carbon_market.jsonl").read_text("utf-8")),
        read_blocks_jsonl((FIXTURES / "corpus" / "report_glacier.jsonl").read_text("utf-8")),
    ]


@pytest.fixture(scope="module")
def provider():
    return ScriptedProvider.from_file(FIXTURES / "provider" / "ablation.json")


def test_config_lattice_full_includes_all_toggles():
    full = next(c for c in ABLATION_CONFIGS if c.name == "self_prompting_rag")
    for config in ABLATION_CONFIGS:
        assert config.toggles <= full.toggles
    names = [c.name for c in ABLATION_CONFIGS]
    assert names == [
        "standard_rag",
        "structured_cot",
        "diversified_indexing",
        "hybrid_retrieval",
        "self_prompting_rag",
    ]


def test_empty_dataset_rejected(documents, provider):
    deps = AblationDeps(documents=documents, provider=provider)
    with pytest.raises(EmptyDataset):
        run_ablation([], ABLATION_CONFIGS, deps)


def test_ablation_emits_5x6_table(documents, provider):
    dataset = load_dataset(FIXTURES / "qa" / "qa25.jsonl")[:6]  # subset: speed
    deps = AblationDeps(documents=documents, provider=provider)
    results = run_ablation(dataset, ABLATION_CONFIGS, deps)
    assert len(results) == 5
    for scores in results.values():
        row = scores.as_row()
        assert len(row) == 6
        assert all(0.0 <= v <= 1.0 for v in row)
    md = render_markdown(results)
    assert md.count("\n") == 7  # header + separator + 5 rows
    csv_text = render_csv(results)
    assert csv_text.splitlines()[0] == "method,ROUGE-1,ROUGE-2,ROUGE-L,BERT-P,BERT-R,BERT-F1"
    assert len(csv_text.splitlines()) == 6


def test_full_config_not_worse_than_baseline(documents, provider):
    dataset = load_dataset(FIXTURES / "qa" / "qa25.jsonl")[:8]
    deps = AblationDeps(documents=documents, provider=provider)
    results = run_ablation(dataset, ABLATION_CONFIGS, deps)
    assert results["self_prompting_rag"].rouge1 >= results["standard_rag"].rouge1
