"""Few-shot example store: question + reasoning chain + SQL, ranked lexically."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from carbonlens.retrieval.lexical import LexicalIndex


@dataclass(frozen=True)
class FewShotExample:
    question: str
    reasoning_chain: str
    sql: str

    def render(self) -> str:
        return f"Question: {self.question}\nReasoning: {self.reasoning_chain}\nSQL: {self.sql}"


class FewShotStore:
    def __init__(self, examples: list[FewShotExample]):
        self.examples = list(examples)
        self._by_key = {f"fs_{i:04d}": ex for i, ex in enumerate(self.examples)}
        self._index = (
            LexicalIndex.build({k: ex.question for k, ex in self._by_key.items()})
            if self.examples
            else None
        )

    @classmethod
    def from_file(cls, path: str | Path) -> "FewShotStore":
        items = json.loads(Path(path).read_text("utf-8"))
        return cls(
            [
                FewShotExample(
                    question=i["question"],
                    reasoning_chain=i.get("reasoning_chain", ""),
                    sql=i["sql"],
                )
                for i in items
            ]
        )

    def top(self, question: str, k: int = 2) -> list[FewShotExample]:
        if not self._index or not question.strip():
            return []
        keys = self._index.rank(question, k)
        return [self._by_key[key] for key in keys]

    def render_samples(self, question: str, k: int = 2) -> str:
        picked = self.top(question, k)
        if not picked:
            return "none"
        return "\n---\n".join(ex.render() for ex in picked)
