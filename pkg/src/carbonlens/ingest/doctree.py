"""Document tree construction with explicit-stack traversal and path compression.

Title blocks ("title", "title2", ... in para_type) open sections; every node's
parent is the nearest preceding title of strictly shallower level (body blocks
attach to the most recent title of any level). Root resolution walks parent
pointers with an explicit stack and compresses the walked path so repeated
lookups are O(1).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from carbonlens.errors import EmptyDocument
from carbonlens.ingest.blocks import Block, SourceDocument
from carbonlens.ingest.chunks import Chunk


@dataclass
class DocumentTreeNode:
    node_id: int
    parent_id: int | None
    is_title: bool
    level: int | None
    text: str
    block_index: int
    title_path: tuple[str, ...] = ()
    content_refs: list[int] = field(default_factory=list)
    root_id: int | None = None


@dataclass
class DocumentTree:
    doc: SourceDocument
    nodes: list[DocumentTreeNode]

    def node(self, node_id: int) -> DocumentTreeNode:
        return self.nodes[node_id]

    def root_of(self, node_id: int) -> int:
        """Resolve a node's root, compressing every pointer along the walk."""
        path = []
        cur = node_id
        node = self.nodes[cur]
        while node.root_id is None or node.root_id != cur:
            if node.root_id is not None:
                cur = node.root_id
                node = self.nodes[cur]
                continue
            if node.parent_id is None:
                break
            path.append(cur)
            cur = node.parent_id
            node = self.nodes[cur]
        for nid in path:
            self.nodes[nid].root_id = cur
        self.nodes[cur].root_id = cur
        return cur


def build_document_tree(doc: SourceDocument) -> DocumentTree:
    """One node per block; parents per the shallower-title rule; paths compressed."""
    if not doc.blocks:
        raise EmptyDocument(doc.doc_id)

    nodes: list[DocumentTreeNode] = []
    open_titles: list[tuple[int, int]] = []  # (level, node_id)

    for idx, block in enumerate(doc.blocks):
        if block.is_title:
            level = block.title_level or 1
            while open_titles and open_titles[-1][0] >= level:
                open_titles.pop()
            parent = open_titles[-1][1] if open_titles else None
            node = DocumentTreeNode(
                node_id=idx,
                parent_id=parent,
                is_title=True,
                level=level,
                text=block.text,
                block_index=idx,
            )
            nodes.append(node)
            open_titles.append((level, idx))
        else:
            parent = open_titles[-1][1] if open_titles else None
            node = DocumentTreeNode(
                node_id=idx,
                parent_id=parent,
                is_title=False,
                level=None,
                text=_body_text(block),
                block_index=idx,
            )
            nodes.append(node)
            if parent is not None:
                nodes[parent].content_refs.append(idx)

    tree = DocumentTree(doc=doc, nodes=nodes)
    _compute_title_paths(tree)
    for node in nodes:
        tree.root_of(node.node_id)
    return tree


def _body_text(block: Block) -> str:
    """Chunkable text of a non-title block; formula/image use payload text.

    Table blocks yield no text here: their grids feed the relational store
    via extract_tables.
    """
    if block.modality == "table":
        return ""
    if block.modality in ("formula", "image") and block.payload:
        extracted = block.payload.get("latex") or block.payload.get("caption")
        if extracted:
            return extracted
    return block.text


def _compute_title_paths(tree: DocumentTree) -> None:
    """Title paths via an explicit stack up the parent chain, memoized.

    A title's path is its parent's path plus its own text; a body node
    carries its enclosing section's path unchanged.
    """
    done = [False] * len(tree.nodes)
    for node in tree.nodes:
        if done[node.node_id]:
            continue
        stack = [node.node_id]
        while stack:
            nid = stack[-1]
            cur = tree.nodes[nid]
            if done[nid]:
                stack.pop()
                continue
            if cur.parent_id is not None and not done[cur.parent_id]:
                stack.append(cur.parent_id)
                continue
            parent_path = tree.nodes[cur.parent_id].title_path if cur.parent_id is not None else ()
            cur.title_path = parent_path + (cur.text,) if cur.is_title else parent_path
            done[nid] = True
            stack.pop()


def merge_tree_chunks(tree: DocumentTree) -> list[Chunk]:
    """Emit one chunk per section whose accumulated body content is non-empty.

    A merge fires when content has accumulated and the walk reaches a title
    or the last node. Bodies join in document order (node ids are unique, so
    the union is the ordered set of accumulated body nodes).
    """
    doc = tree.doc
    chunks: list[Chunk] = []
    acc: list[DocumentTreeNode] = []
    section_path: tuple[str, ...] = ()

    def emit():
        contributing = [n for n in acc if n.text]
        if not contributing:
            return
        bodies = [n.text for n in contributing]
        blocks = [doc.blocks[n.block_index] for n in contributing]
        pages = (min(b.page for b in blocks), max(b.page for b in blocks))
        paras = tuple(b.paragraph_index for b in blocks)
        modality = blocks[0].modality if len({b.modality for b in blocks}) == 1 else "text"
        chunks.append(
            Chunk.build(
                doc_id=doc.doc_id,
                title_path=section_path,
                body=" ".join(bodies),
                pages=pages,
                paragraph_indices=paras,
                modality=modality,
                timestamp=doc.timestamp,
                version=doc.version,
            )
        )

    for node in tree.nodes:
        if node.is_title:
            if acc:
                emit()
                acc = []
            section_path = node.title_path
        else:
            if not acc:
                section_path = node.title_path
            acc.append(node)
    if acc:
        emit()
    return chunks
