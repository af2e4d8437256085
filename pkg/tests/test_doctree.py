"""Document tree construction, path compression, and merge chunking."""

import random

import pytest

from carbonlens.errors import EmptyDocument
from carbonlens.ingest.blocks import Block, SourceDocument
from carbonlens.ingest.doctree import build_document_tree, merge_tree_chunks

from .conftest import make_doc
from .reference_chunker import reference_chunks


def test_no_title_degenerate_three_root_nodes():
    doc = make_doc([("body", "x"), ("body", "y"), ("body", "z")])
    tree = build_document_tree(doc)
    assert len(tree.nodes) == 3
    for node in tree.nodes:
        assert node.parent_id is None
        assert node.title_path == ()


def test_nested_title_path_matches_reference():
    doc = make_doc([("title", "A"), ("title2", "B"), ("body", "x")])
    tree = build_document_tree(doc)
    assert tree.nodes[2].title_path == ("A", "B")
    got = [(c.title_path, c.body) for c in merge_tree_chunks(tree)]
    assert got == reference_chunks(doc)


def test_compression_fixed_point():
    doc = make_doc(
        [("title", "A"), ("title2", "B"), ("title3", "C"), ("body", "x"), ("body", "y")]
    )
    tree = build_document_tree(doc)
    for node in tree.nodes:
        root = tree.root_of(node.node_id)
        assert tree.root_of(root) == root
        assert node.root_id == root


def test_empty_document_rejected():
    doc = make_doc([])
    with pytest.raises(EmptyDocument):
        build_document_tree(doc)


def test_merge_example_sections():
    doc = make_doc(
        [("title", "A"), ("body", "x"), ("body", "y"), ("title", "B"), ("body", "z")]
    )
    chunks = merge_tree_chunks(build_document_tree(doc))
    got = {c.title_path: c.body for c in chunks}
    assert got == {("A",): "x y", ("B",): "z"}


def test_document_ending_in_body_emits_final_chunk():
    doc = make_doc([("title", "A"), ("body", "x")])
    chunks = merge_tree_chunks(build_document_tree(doc))
    assert [(c.title_path, c.body) for c in chunks] == [(("A",), "x")]


def test_title_with_no_body_yields_no_chunk():
    doc = make_doc([("title", "A"), ("title", "B"), ("body", "z")])
    chunks = merge_tree_chunks(build_document_tree(doc))
    assert [(c.title_path, c.body) for c in chunks] == [(("B",), "z")]


def test_provenance_pages_within_contributing_blocks():
    doc = make_doc(
        [("title", "A", 1), ("body", "x", 2), ("body", "y", 3), ("title", "B", 4), ("body", "z", 5)]
    )
    chunks = merge_tree_chunks(build_document_tree(doc))
    by_path = {c.title_path: c for c in chunks}
    assert (by_path[("A",)].page_start, by_path[("A",)].page_end) == (2, 3)
    assert (by_path[("B",)].page_start, by_path[("B",)].page_end) == (5, 5)


def random_block_doc(rng: random.Random, max_blocks: int = 200, max_depth: int = 4) -> SourceDocument:
    n = rng.randint(1, max_blocks)
    blocks = []
    for i in range(n):
        if rng.random() < 0.3:
            depth = rng.randint(1, max_depth)
            para_type = "title" if depth == 1 else f"title{depth}"
            blocks.append(
                Block(para_type=para_type, text=f"T{i}", page=1 + i // 10, paragraph_index=i)
            )
        else:
            blocks.append(
                Block(para_type="body", text=f"b{i}", page=1 + i // 10, paragraph_index=i)
            )
    return SourceDocument(
        doc_id="doc_rand",
        title="rand",
        source_path="<rand>",
        doc_kind="narrative",
        timestamp="2024-01-01T00:00:00Z",
        version=1,
        blocks=blocks,
    )


def test_tree_equivalence_random_sample():
    rng = random.Random(1234)
    for _ in range(60):
        doc = random_block_doc(rng)
        got = [(c.title_path, c.body) for c in merge_tree_chunks(build_document_tree(doc))]
        assert got == reference_chunks(doc)


def test_chunk_ids_deterministic_across_runs():
    doc1 = make_doc([("title", "A"), ("body", "x")])
    doc2 = make_doc([("title", "A"), ("body", "x")])
    ids1 = [c.chunk_id for c in merge_tree_chunks(build_document_tree(doc1))]
    ids2 = [c.chunk_id for c in merge_tree_chunks(build_document_tree(doc2))]
    assert ids1 == ids2
