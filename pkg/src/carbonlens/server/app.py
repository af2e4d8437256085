"""HTTP facade over ingestion, Q&A, report analysis, SQL, and diffs.

Indexes swap atomically on ingest; ingestion serializes per doc_id inside
the chunk store; queries read whatever snapshot is current. The /sql
endpoint only executes when the caller explicitly asks (the console's
approval flow), and execution passes through the instrumented counter.
"""

from __future__ import annotations

import json
import queue
import threading
from dataclasses import dataclass, field
from datetime import date, datetime, timezone
from pathlib import Path

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, StreamingResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from carbonlens.analysis.dimensions import load_dimensions
from carbonlens.analysis.engine import (
    AnalysisDeps,
    assemble_report,
    evaluate_compliance,
    get_company_profile,
    summarize_report,
)
from carbonlens.errors import (
    BlockParseError,
    CarbonLensError,
    DuplicateVersion,
    PreconditionError,
    RepairExhausted,
    VersionNotFound,
)
from carbonlens.ingest.blocks import read_blocks_jsonl
from carbonlens.ingest.chunkers import ChunkingPolicy, chunk_document
from carbonlens.ingest.store import ChunkStore
from carbonlens.ingest.tables import extract_tables
from carbonlens.llm.provider import LlmProvider, RemoteProvider, ScriptedProvider
from carbonlens.nl2sql.catalog import load_catalog, load_data_store
from carbonlens.nl2sql.fewshot import FewShotStore
from carbonlens.nl2sql.service import SqlDeps
from carbonlens.nl2sql.service import run as sql_run
from carbonlens.rag.pipeline import PipelineDeps, StageFailure, run_pipeline
from carbonlens.retrieval.embedder import HashingEmbedder
from carbonlens.retrieval.fusion import index_chunks


@dataclass
class ServerConfig:
    store_dir: str
    provider: str = "scripted:"
    catalog_dir: str | None = None
    data_dir: str | None = None
    fewshot_path: str | None = None
    dimensions_path: str | None = None
    frontend_dist: str | None = None
    cors_allow: list[str] = field(default_factory=list)
    now: str = "2024-03-02"

    @classmethod
    def from_file(cls, path: str | Path) -> "ServerConfig":
        return cls(**json.loads(Path(path).read_text("utf-8")))


def build_provider(spec: str) -> LlmProvider:
    """"scripted:<fixture.json>" or "remote:<endpoint>|<model>[|<api_key>]"."""
    if spec.startswith("scripted:"):
        path = spec.split(":", 1)[1]
        if not path:
            return ScriptedProvider([])
        return ScriptedProvider.from_file(path)
    if spec.startswith("remote:"):
        rest = spec.split(":", 1)[1]
        parts = rest.split("|")
        if len(parts) < 2:
            raise CarbonLensError("remote provider spec needs endpoint|model[|api_key]")
        return RemoteProvider(endpoint=parts[0], model=parts[1], api_key=parts[2] if len(parts) > 2 else "")
    raise CarbonLensError(f"unknown provider spec {spec!r}")


class ServerState:
    def __init__(self, config: ServerConfig):
        self.config = config
        self.store = ChunkStore(config.store_dir)
        self.provider = build_provider(config.provider)
        self.embedder = HashingEmbedder()
        self.dimensions = load_dimensions(config.dimensions_path)
        self.indexes = None
        self._index_lock = threading.Lock()
        self.sql_deps: SqlDeps | None = None
        if config.catalog_dir and config.data_dir:
            catalog = load_catalog(config.catalog_dir)
            store = load_data_store(config.data_dir, catalog)
            fewshot = FewShotStore.from_file(config.fewshot_path) if config.fewshot_path else None
            self.sql_deps = SqlDeps(
                catalog=catalog,
                store=store,
                provider=self.provider,
                fewshot=fewshot,
                now=date.fromisoformat(config.now),
            )
        self.rebuild_indexes()

    def rebuild_indexes(self) -> None:
        chunks = self.store.all_latest_chunks()
        fresh = index_chunks(chunks, self.embedder) if chunks else None
        with self._index_lock:
            self.indexes = fresh

    def doc_titles(self) -> dict[str, str]:
        return {doc_id: self.store.doc_title(doc_id) for doc_id in self.store.doc_ids()}

    def pipeline_deps(self, on_stage=None) -> PipelineDeps:
        if self.indexes is None:
            raise PreconditionError("no documents ingested")
        return PipelineDeps(
            indexes=self.indexes,
            provider=self.provider,
            doc_titles=self.doc_titles(),
            sql=self.sql_deps,
            on_stage=on_stage,
        )


class QueryBody(BaseModel):
    question: str
    stream: bool = False


class AnalyzeBody(BaseModel):
    mode: str = "both"  # summary | evaluate | both


class SqlBody(BaseModel):
    question: str
    execute: bool = False


def _error(status: int, detail: str, **extra) -> JSONResponse:
    return JSONResponse(status_code=status, content={"detail": detail, **extra})


def create_app(config: ServerConfig) -> FastAPI:
    state = ServerState(config)
    app = FastAPI(title="carbonlens", version="0.1.0")
    app.state.engine = state

    if config.cors_allow:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=config.cors_allow,
            allow_methods=["*"],
            allow_headers=["*"],
        )

    @app.post("/documents", status_code=201)
    async def post_documents(request: Request):
        raw = (await request.body()).decode("utf-8")
        if not raw.strip():
            return _error(400, "empty body")
        try:
            doc = read_blocks_jsonl(raw, default_timestamp=_utcnow())
        except BlockParseError as exc:
            return _error(400, f"malformed block: {exc.detail}", line=exc.line_no)
        if not doc.blocks:
            return _error(400, "no blocks in body")
        chunks = chunk_document(doc, ChunkingPolicy(strategy="document_tree"))
        tables = extract_tables(doc)
        try:
            version = state.store.put_document(doc, chunks, tables)
        except DuplicateVersion as exc:
            return _error(409, str(exc))
        state.rebuild_indexes()
        return {"doc_id": doc.doc_id, "version": version, "chunk_count": len(chunks)}

    @app.post("/query")
    def post_query(body: QueryBody):
        if not body.question.strip():
            return _error(422, "question must be non-empty")
        if state.indexes is None:
            return _error(409, "no documents ingested yet")
        if body.stream:
            return _stream_query(state, body.question)
        try:
            bundle = run_pipeline(body.question, state.pipeline_deps())
        except StageFailure as exc:
            return _error(502, str(exc.cause), stage=exc.stage)
        return bundle.to_dict()

    @app.post("/reports/{doc_id}/analyze")
    def post_analyze(doc_id: str, body: AnalyzeBody):
        if body.mode not in ("summary", "evaluate", "both"):
            return _error(422, f"unknown mode {body.mode!r}")
        try:
            chunks = state.store.get_chunks(doc_id)
        except VersionNotFound:
            return _error(404, f"unknown document {doc_id!r}")
        indexes = index_chunks(chunks, state.embedder)
        deps = AnalysisDeps(
            indexes=indexes,
            provider=state.provider,
            dimensions=state.dimensions,
            doc_titles=state.doc_titles(),
        )
        try:
            profile = get_company_profile(deps)
            answers = summarize_report(deps) if body.mode in ("summary", "both") else []
            assessments = evaluate_compliance(deps) if body.mode in ("evaluate", "both") else []
        except CarbonLensError as exc:
            return _error(502, str(exc), stage="analysis")
        document = assemble_report(
            doc_id,
            answers,
            assessments,
            profile,
            state.dimensions,
            metadata={
                "generated_at": _utcnow(),
                "provider": type(state.provider).__name__,
                "doc_version": state.store.versions(doc_id)[-1],
                "mode": body.mode,
            },
        )
        return document.to_dict()

    @app.post("/sql")
    def post_sql(body: SqlBody):
        if not body.question.strip():
            return _error(422, "question must be non-empty")
        if state.sql_deps is None:
            return _error(409, "no SQL catalog configured")
        try:
            result = sql_run(body.question, state.sql_deps, execute=body.execute)
        except RepairExhausted as exc:
            report = exc.report.to_dict() if hasattr(exc.report, "to_dict") else None
            return _error(409, "SQL repair exhausted", validation=report)
        except CarbonLensError as exc:
            return _error(502, str(exc), stage="text2sql")
        payload = result.to_dict()
        if not body.execute:
            payload.pop("result", None)
        return payload

    @app.get("/chunks/{chunk_id}")
    def get_chunk(chunk_id: str):
        chunk = state.store.get_chunk(chunk_id)
        if chunk is None:
            return _error(404, f"unknown chunk {chunk_id!r}")
        payload = chunk.to_dict()
        payload["doc_title"] = state.store.doc_title(chunk.doc_id)
        return payload

    @app.get("/reports/{doc_id}/diff")
    def get_diff(doc_id: str, request: Request):
        params = request.query_params
        try:
            v_from = int(params.get("from", ""))
            v_to = int(params.get("to", ""))
        except ValueError:
            return _error(422, "from and to must be integers")
        try:
            changeset = state.store.diff_versions(doc_id, v_from, v_to)
        except VersionNotFound as exc:
            return _error(404, str(exc))
        except PreconditionError as exc:
            return _error(422, str(exc))
        return changeset.to_dict()

    @app.get("/healthz")
    def healthz():
        return {
            "status": "ok",
            "documents": len(state.store.doc_ids()),
            "sql": state.sql_deps is not None,
        }

    if config.frontend_dist and Path(config.frontend_dist).is_dir():
        app.mount("/", StaticFiles(directory=config.frontend_dist, html=True), name="console")

    return app


def _utcnow() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def _stream_query(state: ServerState, question: str) -> StreamingResponse:
    """Server-sent events: one `stage` event per pipeline stage, then `result`."""
    events: queue.Queue = queue.Queue()

    def on_stage(entry: dict) -> None:
        events.put(("stage", entry))

    def worker() -> None:
        try:
            bundle = run_pipeline(question, state.pipeline_deps(on_stage=on_stage))
            events.put(("result", bundle.to_dict()))
        except StageFailure as exc:
            events.put(("error", {"detail": str(exc.cause), "stage": exc.stage}))
        except CarbonLensError as exc:
            events.put(("error", {"detail": str(exc), "stage": "pipeline"}))
        finally:
            events.put(None)

    threading.Thread(target=worker, daemon=True).start()

    def generate():
        while True:
            item = events.get()
            if item is None:
                break
            kind, payload = item
            yield f"event: {kind}\ndata: {json.dumps(payload, ensure_ascii=False)}\n\n"

    return StreamingResponse(generate(), media_type="text/event-stream")
