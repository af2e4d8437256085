"""LLM provider interface: a scripted deterministic provider for tests and a
chat-completions HTTP client for live use.

ScriptedProvider entries match on the rendered prompt (a plain substring,
an all-of list, or a regex) and the first matching entry wins. An
unmatched prompt is always a hard NoScript error, never a silent fallback.
"""

from __future__ import annotations

import json
import re
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol

import httpx

from carbonlens.errors import NonZeroTemperature, NoScript, TransportError


@dataclass(frozen=True)
class ChatRequest:
    rendered_prompt: str
    temperature: float = 0.0
    max_output_tokens: int = 2048

    def __post_init__(self):
        if self.temperature != 0.0:
            raise NonZeroTemperature("all chat requests run at temperature 0")


class LlmProvider(Protocol):
    def complete(self, request: ChatRequest) -> str: ...


@dataclass(frozen=True)
class ScriptEntry:
    response: str
    contains: str | None = None
    contains_all: tuple[str, ...] = ()
    regex: str | None = None

    def matches(self, prompt: str) -> bool:
        if self.contains is not None and self.contains not in prompt:
            return False
        if self.contains_all and not all(s in prompt for s in self.contains_all):
            return False
        if self.regex is not None and not re.search(self.regex, prompt, re.DOTALL):
            return False
        return self.contains is not None or self.contains_all or self.regex is not None


class ScriptedProvider:
    """Ordered matcher list; immutable after construction; thread-safe."""

    def __init__(self, entries: list[ScriptEntry]):
        self._entries = tuple(entries)

    @classmethod
    def from_spec(cls, spec: list[dict]) -> "ScriptedProvider":
        entries = []
        for item in spec:
            entries.append(
                ScriptEntry(
                    response=item["response"],
                    contains=item.get("contains"),
                    contains_all=tuple(item.get("contains_all", ())),
                    regex=item.get("regex"),
                )
            )
        return cls(entries)

    @classmethod
    def from_file(cls, path: str | Path) -> "ScriptedProvider":
        return cls.from_spec(json.loads(Path(path).read_text("utf-8")))

    def complete(self, request: ChatRequest) -> str:
        for entry in self._entries:
            if entry.matches(request.rendered_prompt):
                return entry.response
        head = request.rendered_prompt[:160].replace("\n", " ")
        raise NoScript(f"no scripted response matches prompt starting: {head!r}")


class RemoteProvider:
    """Chat-completions-compatible JSON POST client with bounded retries."""

    def __init__(
        self,
        endpoint: str,
        model: str,
        api_key: str = "",
        timeout: float = 30.0,
        max_attempts: int = 3,
        backoff_s: float = 0.5,
        transport: httpx.BaseTransport | None = None,
    ):
        self.endpoint = endpoint
        self.model = model
        self._headers = {"Content-Type": "application/json"}
        if api_key:
            self._headers["Authorization"] = f"Bearer {api_key}"
        self._timeout = timeout
        self._max_attempts = max_attempts
        self._backoff_s = backoff_s
        self._transport = transport

    def complete(self, request: ChatRequest) -> str:
        payload = {
            "model": self.model,
            "messages": [{"role": "user", "content": request.rendered_prompt}],
            "temperature": request.temperature,
            "max_tokens": request.max_output_tokens,
        }
        last_exc: Exception | None = None
        for attempt in range(self._max_attempts):
            try:
                with httpx.Client(timeout=self._timeout, transport=self._transport) as client:
                    resp = client.post(self.endpoint, json=payload, headers=self._headers)
                if resp.status_code >= 500:
                    raise httpx.TransportError(f"server error {resp.status_code}")
                resp.raise_for_status()
                data = resp.json()
                return data["choices"][0]["message"]["content"]
            except (httpx.TransportError, httpx.TimeoutException) as exc:
                last_exc = exc
                if attempt + 1 < self._max_attempts:
                    time.sleep(self._backoff_s * (2**attempt))
            except httpx.HTTPStatusError as exc:
                raise TransportError(f"provider rejected request: {exc}") from exc
            except (KeyError, IndexError, ValueError) as exc:
                raise TransportError(f"malformed provider response: {exc}") from exc
        raise TransportError(f"transport failed after {self._max_attempts} attempts: {last_exc}")


def complete(provider: LlmProvider, request: ChatRequest) -> str:
    """Forward to the provider; the response comes back verbatim."""
    return provider.complete(request)
