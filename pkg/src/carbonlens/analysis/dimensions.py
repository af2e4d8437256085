"""The 14 disclosure dimensions, loaded from an editable JSON registry."""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from carbonlens.errors import ConfigError

EXPECTED_COUNT = 14


@dataclass(frozen=True)
class AnalysisDimension:
    id: str
    title: str
    guideline_text: str
    seed_queries: tuple[str, ...]

    @property
    def number(self) -> int:
        return int(self.id.split("_")[1])


def load_dimensions(path: str | Path | None = None) -> list[AnalysisDimension]:
    """Load the registry; the default ships with the package. Exactly 14
    uniquely-numbered dimensions are required."""
    if path is None:
        raw = resources.files("carbonlens.analysis").joinpath("data/dimensions.json").read_text("utf-8")
    else:
        raw = Path(path).read_text("utf-8")
    items = json.loads(raw)
    dims = [
        AnalysisDimension(
            id=i["id"],
            title=i["title"],
            guideline_text=i["guideline_text"],
            seed_queries=tuple(i.get("seed_queries", ())),
        )
        for i in items
    ]
    if len(dims) != EXPECTED_COUNT:
        raise ConfigError(f"dimension registry has {len(dims)} entries, expected {EXPECTED_COUNT}")
    if len({d.id for d in dims}) != EXPECTED_COUNT:
        raise ConfigError("dimension ids must be unique")
    dims.sort(key=lambda d: d.number)
    return dims
