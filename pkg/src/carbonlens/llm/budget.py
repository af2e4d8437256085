"""Context trimming against a fixed token budget.

While the assembled context exceeds the budget, the lowest-scored chunk is
removed (ties drop the later chunk); survivor order is preserved. The last
remaining chunk is never removed: it is truncated to the budget instead.
"""

from __future__ import annotations

from dataclasses import dataclass

from carbonlens import text as T
from carbonlens.ingest.chunks import Chunk

DEFAULT_BUDGET = 3000


@dataclass(frozen=True)
class TokenBudget:
    limit: int = DEFAULT_BUDGET

    def count(self, text: str) -> int:
        return T.count_tokens(text)


def trim_context(
    chunks_with_scores: list[tuple[Chunk, float]],
    budget: TokenBudget = TokenBudget(),
) -> list[Chunk]:
    items = list(chunks_with_scores)
    if not items:
        return []

    def total(parts: list[tuple[Chunk, float]]) -> int:
        return sum(budget.count(c.body) for c, _ in parts)

    while len(items) > 1 and total(items) > budget.limit:
        drop_pos = min(range(len(items)), key=lambda i: (items[i][1], -i))
        items.pop(drop_pos)

    survivors = [c for c, _ in items]
    if len(survivors) == 1 and budget.count(survivors[0].body) > budget.limit:
        c = survivors[0]
        from dataclasses import replace

        survivors = [
            replace(
                c,
                body=T.truncate_to_budget(c.body, budget.limit),
                flags=c.flags + ("truncated_to_budget",),
            )
        ]
    return survivors
