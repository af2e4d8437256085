import json
from pathlib import Path

import pytest

from carbonlens.ingest.blocks import Block, SourceDocument
from carbonlens.llm.provider import ScriptedProvider

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


def make_doc(blocks: list[tuple], doc_id: str = "doc_test", **kwargs) -> SourceDocument:
    """Build a SourceDocument from (para_type, text) or (para_type, text, page) tuples."""
    built = []
    for i, spec in enumerate(blocks):
        para_type, text = spec[0], spec[1]
        page = spec[2] if len(spec) > 2 else 1
        built.append(Block(para_type=para_type, text=text, page=page, paragraph_index=i))
    defaults = dict(
        doc_id=doc_id,
        title="Test document",
        source_path="<test>",
        doc_kind="narrative",
        timestamp="2024-01-01T00:00:00Z",
        version=1,
    )
    defaults.update(kwargs)
    return SourceDocument(blocks=built, **defaults)


def scripted(entries: list[dict]) -> ScriptedProvider:
    return ScriptedProvider.from_spec(entries)


def load_json(path: Path):
    return json.loads(path.read_text("utf-8"))
