"""Command-line surface: ingest, ask, sql ask, analyze, eval, serve."""

from __future__ import annotations

import json
import sys
from datetime import date, datetime, timezone
from pathlib import Path

import click

from carbonlens.errors import CarbonLensError, DuplicateVersion
from carbonlens.ingest.blocks import read_blocks_jsonl
from carbonlens.ingest.chunkers import ChunkingPolicy, chunk_document
from carbonlens.ingest.store import ChunkStore
from carbonlens.ingest.tables import extract_tables
from carbonlens.llm.provider import LlmProvider
from carbonlens.retrieval.embedder import HashingEmbedder
from carbonlens.retrieval.fusion import index_chunks
from carbonlens.retrieval.snapshot import load_indexes, save_indexes

STRATEGY_BY_FLAG = {
    "tree": "document_tree",
    "rules": "rule_based",
    "semantic": "semantic",
    "sliding": "paragraph_sliding",
}


def build_provider(spec: str) -> LlmProvider:
    from carbonlens.server.app import build_provider as _build

    return _build(spec)


def _load_store_indexes(store_dir: Path):
    store = ChunkStore(store_dir)
    chunks = store.all_latest_chunks()
    if not chunks:
        raise click.ClickException(f"no documents in store {store_dir}")
    embedder = HashingEmbedder()
    index_dir = store_dir / "index"
    by_id = {c.chunk_id: c for c in chunks}
    if (index_dir / "meta.json").exists():
        try:
            return store, load_indexes(index_dir, embedder, by_id)
        except Exception:
            pass  # stale snapshot: rebuild below
    return store, index_chunks(chunks, embedder)


@click.group()
def main():
    """Corporate carbon-report analysis and climate-policy Q&A engine."""


@main.command()
@click.option("--input", "input_path", required=True, type=click.Path(exists=True, path_type=Path))
@click.option("--store", "store_dir", default="./chunk_store", type=click.Path(path_type=Path))
@click.option("--strategy", type=click.Choice(sorted(STRATEGY_BY_FLAG)), default="tree")
@click.option("--window", default=200, show_default=True, help="window size in budget tokens")
@click.option("--overlap", default=30, show_default=True, help="window overlap in budget tokens")
@click.option("--rules", "rules_path", type=click.Path(exists=True, path_type=Path), default=None,
              help="file with one boundary regex per line (rules strategy)")
@click.option("--threshold", default=0.6, show_default=True, help="semantic boundary threshold")
def ingest(input_path, store_dir, strategy, window, overlap, rules_path, threshold):
    """Ingest a JSON-lines block file into the chunk store and (re)index."""
    patterns = []
    if rules_path:
        patterns = [ln.strip() for ln in rules_path.read_text("utf-8").splitlines() if ln.strip()]
    policy = ChunkingPolicy(
        strategy=STRATEGY_BY_FLAG[strategy],
        window_tokens=window,
        overlap_tokens=overlap,
        rule_patterns=patterns,
        boundary_threshold=threshold,
    )
    doc = read_blocks_jsonl(
        input_path.read_text("utf-8"),
        source_path=str(input_path),
        default_timestamp=datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ"),
    )
    chunks = chunk_document(doc, policy)
    tables = extract_tables(doc)
    store = ChunkStore(store_dir)
    try:
        version = store.put_document(doc, chunks, tables)
    except DuplicateVersion as exc:
        raise click.ClickException(str(exc))
    all_chunks = store.all_latest_chunks()
    indexes = index_chunks(all_chunks, HashingEmbedder())
    save_indexes(indexes, store_dir / "index")
    click.echo(
        json.dumps(
            {
                "doc_id": doc.doc_id,
                "version": version,
                "chunk_count": len(chunks),
                "table_count": len(tables),
                "indexed_chunks": len(all_chunks),
            }
        )
    )


@main.command()
@click.argument("question")
@click.option("--index", "index_dir", required=True, type=click.Path(exists=True, path_type=Path),
              help="chunk store directory (holds the index snapshot)")
@click.option("--provider", "provider_spec", default="scripted:", show_default=True)
@click.option("--catalog", type=click.Path(path_type=Path), default=None)
@click.option("--data", type=click.Path(path_type=Path), default=None)
@click.option("--fewshot", type=click.Path(path_type=Path), default=None)
@click.option("--now", default="2024-03-02", show_default=True)
def ask(question, index_dir, provider_spec, catalog, data, fewshot, now):
    """Answer a question over the ingested corpus; emits an AnswerBundle JSON."""
    from carbonlens.nl2sql.catalog import load_catalog, load_data_store
    from carbonlens.nl2sql.fewshot import FewShotStore
    from carbonlens.nl2sql.service import SqlDeps
    from carbonlens.rag.pipeline import PipelineDeps, run_pipeline

    store, indexes = _load_store_indexes(index_dir)
    provider = build_provider(provider_spec)
    sql_deps = None
    if catalog and data:
        cat = load_catalog(catalog)
        sql_deps = SqlDeps(
            catalog=cat,
            store=load_data_store(data, cat),
            provider=provider,
            fewshot=FewShotStore.from_file(fewshot) if fewshot else None,
            now=date.fromisoformat(now),
        )
    deps = PipelineDeps(
        indexes=indexes,
        provider=provider,
        doc_titles={d: store.doc_title(d) for d in store.doc_ids()},
        sql=sql_deps,
    )
    try:
        bundle = run_pipeline(question, deps)
    except CarbonLensError as exc:
        raise click.ClickException(str(exc))
    click.echo(json.dumps(bundle.to_dict(), indent=1, ensure_ascii=False))


@main.group()
def sql():
    """Natural-language SQL over the relational store."""


@sql.command("ask")
@click.argument("question")
@click.option("--catalog", required=True, type=click.Path(exists=True, path_type=Path))
@click.option("--data", required=True, type=click.Path(exists=True, path_type=Path))
@click.option("--provider", "provider_spec", default="scripted:", show_default=True)
@click.option("--fewshot", type=click.Path(path_type=Path), default=None)
@click.option("--now", default="2024-03-02", show_default=True)
@click.option("--no-execute", is_flag=True, help="stop after validation (approval flow)")
def sql_ask(question, catalog, data, provider_spec, fewshot, now, no_execute):
    """Generate, validate, and execute SQL for QUESTION."""
    from carbonlens.nl2sql.catalog import load_catalog, load_data_store
    from carbonlens.nl2sql.fewshot import FewShotStore
    from carbonlens.nl2sql.service import SqlDeps
    from carbonlens.nl2sql.service import run as sql_run

    cat = load_catalog(catalog)
    deps = SqlDeps(
        catalog=cat,
        store=load_data_store(data, cat),
        provider=build_provider(provider_spec),
        fewshot=FewShotStore.from_file(fewshot) if fewshot else None,
        now=date.fromisoformat(now),
    )
    try:
        result = sql_run(question, deps, execute=not no_execute)
    except CarbonLensError as exc:
        raise click.ClickException(str(exc))
    click.echo(json.dumps(result.to_dict(), indent=1, ensure_ascii=False))


@main.command()
@click.option("--report", "doc_id", required=True, help="ingested document id")
@click.option("--store", "store_dir", required=True, type=click.Path(exists=True, path_type=Path))
@click.option("--provider", "provider_spec", default="scripted:", show_default=True)
@click.option("--dimensions", "dimensions_path", type=click.Path(path_type=Path), default=None)
@click.option("--out", "out_path", type=click.Path(path_type=Path), default=None,
              help="report.json or report.md (stdout when omitted)")
@click.option("--mode", type=click.Choice(["summary", "evaluate", "both"]), default="both")
def analyze(doc_id, store_dir, provider_spec, dimensions_path, out_path, mode):
    """Run the 14-dimension analysis over an ingested report."""
    from carbonlens.analysis.dimensions import load_dimensions
    from carbonlens.analysis.engine import (
        AnalysisDeps,
        assemble_report,
        evaluate_compliance,
        get_company_profile,
        summarize_report,
    )

    store = ChunkStore(store_dir)
    chunks = store.get_chunks(doc_id)
    indexes = index_chunks(chunks, HashingEmbedder())
    deps = AnalysisDeps(
        indexes=indexes,
        provider=build_provider(provider_spec),
        dimensions=load_dimensions(dimensions_path),
        doc_titles={doc_id: store.doc_title(doc_id)},
    )
    try:
        profile = get_company_profile(deps)
        answers = summarize_report(deps) if mode in ("summary", "both") else []
        assessments = evaluate_compliance(deps) if mode in ("evaluate", "both") else []
    except CarbonLensError as exc:
        raise click.ClickException(str(exc))
    document = assemble_report(
        doc_id,
        answers,
        assessments,
        profile,
        deps.dimensions,
        metadata={
            "generated_at": datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ"),
            "provider": provider_spec.split(":", 1)[0],
            "doc_version": store.versions(doc_id)[-1],
            "mode": mode,
        },
    )
    rendered = document.to_markdown() if out_path and out_path.suffix == ".md" else document.to_json()
    if out_path:
        out_path.write_text(rendered, "utf-8")
        click.echo(f"wrote {out_path}")
    else:
        click.echo(rendered)


@main.command(name="eval")
@click.option("--dataset", required=True, type=click.Path(exists=True, path_type=Path))
@click.option("--corpus", "corpus_paths", multiple=True, required=True,
              type=click.Path(exists=True, path_type=Path), help="block JSONL file (repeatable)")
@click.option("--provider", "provider_spec", default="scripted:", show_default=True)
@click.option("--configs", default="all", show_default=True,
              help="'all' or comma-separated config names")
@click.option("--out", "out_path", type=click.Path(path_type=Path), default=None,
              help="table.md or table.csv (stdout when omitted)")
def eval_cmd(dataset, corpus_paths, provider_spec, configs, out_path):
    """Run the ablation harness over a QA dataset and emit the metric table."""
    from carbonlens.evalsuite.ablation import (
        ABLATION_CONFIGS,
        AblationDeps,
        load_dataset,
        render_csv,
        render_markdown,
        run_ablation,
    )

    picked = ABLATION_CONFIGS
    if configs != "all":
        names = {n.strip() for n in configs.split(",")}
        picked = tuple(c for c in ABLATION_CONFIGS if c.name in names)
        if not picked:
            raise click.ClickException(f"no configs match {configs!r}")
    documents = [read_blocks_jsonl(p.read_text("utf-8"), source_path=str(p)) for p in corpus_paths]
    deps = AblationDeps(documents=documents, provider=build_provider(provider_spec))
    try:
        results = run_ablation(load_dataset(dataset), picked, deps)
    except CarbonLensError as exc:
        raise click.ClickException(str(exc))
    rendered = render_csv(results) if out_path and out_path.suffix == ".csv" else render_markdown(results)
    if out_path:
        out_path.write_text(rendered, "utf-8")
        click.echo(f"wrote {out_path}")
    else:
        click.echo(rendered)


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True, path_type=Path))
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8800, show_default=True)
def serve(config_path, host, port):
    """Serve the HTTP API (and the console, when built) from a config file."""
    import uvicorn

    from carbonlens.server.app import ServerConfig, create_app

    app = create_app(ServerConfig.from_file(config_path))
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    sys.exit(main())
