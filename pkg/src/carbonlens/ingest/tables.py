"""Table grid extraction: span resolution, page-break merging, header inference.

Grid payload shape (one table block):
    {"grid": [[{"v": "...", "col_span": k?, "row_merge": true?}, ...], ...],
     "title": "...?", "has_header": bool?}

col_span replicates a cell across k columns; row_merge fills a cell downward
from the same column of the previous row. A grid on the page after another
table with the same column count continues it when it shares the title or
carries no header of its own.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

from carbonlens.errors import TableShapeError
from carbonlens.ingest.blocks import Block, SourceDocument


@dataclass
class TableRecord:
    table_id: str
    title: str | None
    headers: list[str]
    rows: list[list[str]]
    merged_from_pages: list[int]
    header_inferred: bool
    doc_id: str
    paragraph_indices: list[int] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "table_id": self.table_id,
            "title": self.title,
            "headers": self.headers,
            "rows": self.rows,
            "merged_from_pages": self.merged_from_pages,
            "header_inferred": self.header_inferred,
            "doc_id": self.doc_id,
            "paragraph_indices": self.paragraph_indices,
        }


def _resolve_grid(grid: list[list[dict]]) -> list[list[str]]:
    """Expand col_span and fill row_merge cells from the row above."""
    resolved: list[list[str]] = []
    for r, row in enumerate(grid):
        out: list[str] = []
        for cell in row:
            span = int(cell.get("col_span", 1) or 1)
            if cell.get("row_merge"):
                for _ in range(span):
                    col = len(out)
                    above = resolved[-1][col] if resolved and col < len(resolved[-1]) else ""
                    out.append(above)
            else:
                value = str(cell.get("v", ""))
                out.extend([value] * span)
        resolved.append(out)
    return resolved


@dataclass
class _RawTable:
    block_index: int
    page: int
    paragraph_index: int
    title: str | None
    has_header: bool
    rows: list[list[str]]  # span-resolved, header row included when present

    @property
    def arity(self) -> int:
        return len(self.rows[0]) if self.rows else 0


def _continues(prev: _RawTable, cur: _RawTable) -> bool:
    if cur.arity != prev.arity or not prev.rows or not cur.rows:
        return False
    if cur.page < prev.page or cur.page > prev.page + 1:
        return False
    if prev.title and cur.title and prev.title == cur.title:
        return True
    # header-less grid right after a page break continues the previous table
    return not cur.has_header and cur.page == prev.page + 1


def extract_tables(doc: SourceDocument) -> list[TableRecord]:
    raws: list[_RawTable] = []
    for i, block in enumerate(doc.blocks):
        if block.modality != "table" or not block.payload:
            continue
        payload = block.payload
        rows = _resolve_grid(payload.get("grid", []))
        if not rows:
            continue
        raws.append(
            _RawTable(
                block_index=i,
                page=block.page,
                paragraph_index=block.paragraph_index,
                title=payload.get("title") or (block.text or None),
                has_header=bool(payload.get("has_header", True)),
                rows=rows,
            )
        )

    # merge continuations into the preceding table
    groups: list[list[_RawTable]] = []
    for raw in raws:
        if groups and _continues(groups[-1][-1], raw):
            groups[-1].append(raw)
        else:
            groups.append([raw])

    records: list[TableRecord] = []
    for group in groups:
        first = group[0]
        if first.has_header:
            headers = [h.strip() for h in first.rows[0]]
            data = first.rows[1:]
            inferred = False
        else:
            donor = next(
                (r for r in reversed(records) if len(r.headers) == first.arity), None
            )
            headers = list(donor.headers) if donor else [f"col_{k + 1}" for k in range(first.arity)]
            data = list(first.rows)
            inferred = True
        pages = [first.page]
        paras = [first.paragraph_index]
        for cont in group[1:]:
            rows = cont.rows[1:] if (cont.has_header and cont.title == first.title) else cont.rows
            data.extend(rows)
            pages.append(cont.page)
            paras.append(cont.paragraph_index)

        for r, row in enumerate(data):
            if len(row) != len(headers):
                raise TableShapeError(r, f"row has {len(row)} cells, expected {len(headers)}")

        key = f"{doc.doc_id}|{first.block_index}|{first.title or ''}"
        records.append(
            TableRecord(
                table_id="tb_" + hashlib.sha256(key.encode("utf-8")).hexdigest()[:12],
                title=first.title,
                headers=headers,
                rows=data,
                merged_from_pages=sorted(set(pages)),
                header_inferred=inferred,
                doc_id=doc.doc_id,
                paragraph_indices=paras,
            )
        )
    return records
