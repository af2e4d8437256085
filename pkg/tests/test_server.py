"""HTTP facade: endpoint behavior plus schema contract validation."""

import json
from pathlib import Path

import jsonschema
import pytest
from fastapi.testclient import TestClient

from carbonlens.server.app import ServerConfig, create_app

from .conftest import FIXTURES

SCHEMAS = Path(__file__).resolve().parent.parent / "docs" / "schemas"


def schema(name: str) -> dict:
    return json.loads((SCHEMAS / name).read_text("utf-8"))


def validate(payload: dict, schema_name: str) -> None:
    jsonschema.validate(payload, schema(schema_name))


@pytest.fixture(scope="module")
def client(tmp_path_factory):
    store_dir = tmp_path_factory.mktemp("store")
    config = ServerConfig(
        store_dir=str(store_dir),
        provider=f"scripted:{FIXTURES / 'provider' / 'server.json'}",
        catalog_dir=str(FIXTURES / "sql" / "schema"),
        data_dir=str(FIXTURES / "sql" / "data"),
        fewshot_path=str(FIXTURES / "sql" / "fewshot.json"),
    )
    app = create_app(config)
    with TestClient(app) as c:
        yield c


@pytest.fixture(scope="module")
def ingested(client):
    body = (FIXTURES / "corpus" / "policy_carbon_market.jsonl").read_text("utf-8")
    resp = client.post("/documents", content=body)
    assert resp.status_code == 201, resp.text
    payload = resp.json()
    validate(payload, "ingest_response.schema.json")
    return payload


def test_ingest_and_duplicate_409(client, ingested):
    body = (FIXTURES / "corpus" / "policy_carbon_market.jsonl").read_text("utf-8")
    resp = client.post("/documents", content=body)
    assert resp.status_code == 409


def test_ingest_malformed_line_400_with_line_number(client):
    resp = client.post("/documents", content='{"para_type": "body", "text": "x"}\n{broken')
    assert resp.status_code == 400
    assert resp.json()["line"] == 2


def test_query_empty_question_422(client, ingested):
    resp = client.post("/query", json={"question": "  "})
    assert resp.status_code == 422


def test_query_golden_bundle_schema(client, ingested):
    resp = client.post("/query", json={"question": "How are carbon allowances handed out?"})
    assert resp.status_code == 200, resp.text
    bundle = resp.json()
    validate(bundle, "answer_bundle.schema.json")
    assert bundle["intent"] == "POLICY_RELATED"
    assert bundle["answer"]
    assert bundle["citations"]


def test_query_provider_down_502_with_stage(client, ingested):
    resp = client.post("/query", json={"question": "unscripted question about volcanoes"})
    assert resp.status_code == 502
    # the fixture's generic intent matcher answers P4, so the first
    # unscripted provider call is the query rewrite
    assert resp.json()["stage"] == "rewrite_query"


def test_query_streamed_stage_events(client, ingested):
    with client.stream(
        "POST", "/query", json={"question": "How are carbon allowances handed out?", "stream": True}
    ) as resp:
        assert resp.status_code == 200
        text = "".join(resp.iter_text())
    assert "event: stage" in text
    assert "event: result" in text
    assert '"stage": "classify_intent"' in text


def test_citation_resolves_via_chunks_endpoint(client, ingested):
    bundle = client.post("/query", json={"question": "How are carbon allowances handed out?"}).json()
    chunk_id = bundle["citations"][0]["chunk_id"]
    resp = client.get(f"/chunks/{chunk_id}")
    assert resp.status_code == 200
    payload = resp.json()
    validate(payload, "chunk.schema.json")
    assert payload["body"]


def test_unknown_chunk_404(client):
    assert client.get("/chunks/ck_nope").status_code == 404


def test_sql_approval_gate_execute_false_skips_executor(client):
    engine = client.app.state.engine
    before = engine.sql_deps.counter.executions
    resp = client.post("/sql", json={"question": "How many facilities does each company have?", "execute": False})
    assert resp.status_code == 200, resp.text
    payload = resp.json()
    validate(payload, "sql_response.schema.json")
    assert "result" not in payload
    assert payload["validation"]["verdict"] == "pass"
    assert engine.sql_deps.counter.executions == before


def test_sql_execute_true_returns_golden_result(client):
    resp = client.post("/sql", json={"question": "How many facilities does each company have?", "execute": True})
    assert resp.status_code == 200
    payload = resp.json()
    validate(payload, "sql_response.schema.json")
    assert payload["result"]["rows"] == [["AcmeSteel", 2], ["GreenVolt", 1], ["NordicFoods", 2]]


def test_sql_forbidden_generation_409_with_report(client):
    resp = client.post("/sql", json={"question": "please wipe the emissions table", "execute": True})
    assert resp.status_code == 409
    payload = resp.json()
    assert payload["validation"]["verdict"] == "fail"
    assert payload["validation"]["violations"][0]["code"] == "ForbiddenStatement"


def test_sql_empty_question_422(client):
    assert client.post("/sql", json={"question": " ", "execute": False}).status_code == 422


def test_diff_endpoint_golden_changeset(client, ingested):
    v2 = (FIXTURES / "corpus" / "policy_carbon_market.jsonl").read_text("utf-8").replace(
        "at most 5 percent", "at most 10 percent"
    )
    resp = client.post("/documents", content=v2)
    assert resp.status_code == 201
    doc_id = resp.json()["doc_id"]
    resp = client.get(f"/reports/{doc_id}/diff", params={"from": 1, "to": 2})
    assert resp.status_code == 200
    payload = resp.json()
    validate(payload, "changeset.schema.json")
    assert len(payload["modified_chunks"]) == 1
    assert payload["added_chunks"] == [] and payload["removed_chunks"] == []


def test_diff_bad_params_422_and_unknown_404(client, ingested):
    doc_id = ingested["doc_id"]
    assert client.get(f"/reports/{doc_id}/diff", params={"from": "x", "to": 2}).status_code == 422
    assert client.get("/reports/nope/diff", params={"from": 1, "to": 2}).status_code == 404
    assert client.get(f"/reports/{doc_id}/diff", params={"from": 2, "to": 2}).status_code == 422


def test_analyze_unknown_doc_404(client):
    assert client.post("/reports/nope/analyze", json={"mode": "both"}).status_code == 404


def test_healthz(client):
    payload = client.get("/healthz").json()
    assert payload["status"] == "ok"
    assert payload["sql"] is True


@pytest.fixture(scope="module")
def report_client(tmp_path_factory):
    store_dir = tmp_path_factory.mktemp("report_store")
    config = ServerConfig(
        store_dir=str(store_dir),
        provider=f"scripted:{FIXTURES / 'provider' / 'report_analysis.json'}",
    )
    app = create_app(config)
    with TestClient(app) as c:
        body = (FIXTURES / "corpus" / "report_glacier.jsonl").read_text("utf-8")
        resp = c.post("/documents", content=body)
        assert resp.status_code == 201
        yield c


def test_analyze_both_14_entries_schema(report_client):
    resp = report_client.post("/reports/glacier_2023/analyze", json={"mode": "both"})
    assert resp.status_code == 200, resp.text
    payload = resp.json()
    validate(payload, "analysis_report.schema.json")
    assert len(payload["entries"]) == 14
    scores = [e["score"] for e in payload["entries"]]
    assert all(s is not None and 0 <= s <= 100 for s in scores)
    assert any(e["analysis"] for e in payload["entries"])


def test_analyze_mode_evaluate_scores_only(report_client):
    resp = report_client.post("/reports/glacier_2023/analyze", json={"mode": "evaluate"})
    assert resp.status_code == 200
    payload = resp.json()
    validate(payload, "analysis_report.schema.json")
    assert all(e["analysis"] is None for e in payload["entries"])
    assert all(e["score"] is not None for e in payload["entries"])


def test_analyze_bad_mode_422(report_client):
    assert report_client.post("/reports/glacier_2023/analyze", json={"mode": "banana"}).status_code == 422


def test_console_served_statically_when_built(tmp_path):
    dist = Path(__file__).resolve().parent.parent / "frontend" / "dist"
    if not (dist / "index.html").exists():
        pytest.skip("console not built")
    config = ServerConfig(store_dir=str(tmp_path / "store"), frontend_dist=str(dist))
    with TestClient(create_app(config)) as c:
        resp = c.get("/")
        assert resp.status_code == 200
        assert "carbonlens console" in resp.text
        assert c.get("/main.js").status_code == 200
