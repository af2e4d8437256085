"""Exception types shared across the engine."""


class CarbonLensError(Exception):
    """Base class for all engine errors."""


class ConfigError(CarbonLensError):
    """Invalid configuration value (policy, fusion parameters, catalog)."""


class PreconditionError(CarbonLensError):
    """An operation precondition was violated by the caller."""


class EmptyDocument(CarbonLensError):
    """Ingestion received a document with no blocks."""


class BlockParseError(CarbonLensError):
    """A JSON-lines block could not be parsed; carries the 1-based line number."""

    def __init__(self, line_no: int, detail: str):
        super().__init__(f"line {line_no}: {detail}")
        self.line_no = line_no
        self.detail = detail


class TableShapeError(CarbonLensError):
    """A table row has the wrong arity after span resolution."""

    def __init__(self, row_index: int, detail: str = ""):
        super().__init__(f"row {row_index}: {detail}" if detail else f"row {row_index}")
        self.row_index = row_index


class VersionNotFound(CarbonLensError):
    """Requested document version is not in the store."""


class DuplicateVersion(CarbonLensError):
    """Re-ingestion of byte-identical content for an existing version."""


class EmptyQuery(CarbonLensError):
    """A retrieval operation received an empty query."""


class MissingSlot(CarbonLensError):
    """A prompt template was rendered without a required slot."""

    def __init__(self, name: str):
        super().__init__(name)
        self.name = name


class NoScript(CarbonLensError):
    """ScriptedProvider had no entry matching the prompt."""


class TransportError(CarbonLensError):
    """Remote provider failed after exhausting retries."""


class NonZeroTemperature(ConfigError):
    """Chat requests are pinned to temperature 0."""


class IntentParseError(CarbonLensError):
    """Provider output was not one of the four intent labels."""


class TimeParseError(CarbonLensError):
    """Provider time-extraction output was not parseable JSON windows."""


class GenerationError(CarbonLensError):
    """SQL generation produced empty output."""


class UnsupportedSyntax(CarbonLensError):
    """SQL text outside the supported subset; carries a 1-based char offset."""

    def __init__(self, position: int, token: str, detail: str = ""):
        msg = f"unsupported syntax at offset {position}: {token!r}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)
        self.position = position
        self.token = token


class RepairExhausted(CarbonLensError):
    """SQL repair loop hit its round limit; carries the last validation report."""

    def __init__(self, report):
        super().__init__("repair rounds exhausted")
        self.report = report


class QueryExecutionError(CarbonLensError):
    """Row-level failure during query execution (e.g. division by zero)."""

    def __init__(self, detail: str, row_context=None):
        super().__init__(detail)
        self.row_context = row_context


class ScoreParseError(CarbonLensError):
    """No compliance score found in provider output."""


class ProfileParseError(CarbonLensError):
    """Company-profile output was not valid JSON."""


class JudgeParseError(CarbonLensError):
    """Relevance judge output held no integer score."""


class EmptyDataset(CarbonLensError):
    """Evaluation dataset contained no usable pairs."""
