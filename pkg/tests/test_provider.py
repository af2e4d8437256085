"""Scripted and remote provider behavior."""

import httpx
import pytest

from carbonlens.errors import NonZeroTemperature, NoScript, TransportError
from carbonlens.llm.provider import ChatRequest, RemoteProvider, ScriptedProvider, complete

from .conftest import scripted


def test_scripted_substring_match():
    p = scripted([{"contains": "Question: Q1", "response": "A1"}])
    assert complete(p, ChatRequest(rendered_prompt="... Question: Q1 ...")) == "A1"


def test_scripted_unmatched_raises_noscript():
    p = scripted([{"contains": "nope", "response": "A"}])
    with pytest.raises(NoScript):
        p.complete(ChatRequest(rendered_prompt="something else"))


def test_scripted_first_match_wins():
    p = scripted(
        [
            {"contains": "Question", "response": "first"},
            {"contains": "Question: Q1", "response": "second"},
        ]
    )
    assert p.complete(ChatRequest(rendered_prompt="Question: Q1")) == "first"


def test_scripted_contains_all_and_regex():
    p = scripted(
        [
            {"contains_all": ["alpha", "beta"], "response": "both"},
            {"regex": r"gamma\s+\d+", "response": "rx"},
        ]
    )
    assert p.complete(ChatRequest(rendered_prompt="beta then alpha")) == "both"
    assert p.complete(ChatRequest(rendered_prompt="gamma  42")) == "rx"


def test_nonzero_temperature_rejected_at_construction():
    with pytest.raises(NonZeroTemperature):
        ChatRequest(rendered_prompt="x", temperature=0.7)


def test_remote_provider_retries_transient_then_succeeds():
    calls = {"n": 0}

    def handler(request: httpx.Request) -> httpx.Response:
        calls["n"] += 1
        if calls["n"] < 3:
            return httpx.Response(500, json={"error": "boom"})
        return httpx.Response(
            200, json={"choices": [{"message": {"content": "hello"}}]}
        )

    provider = RemoteProvider(
        endpoint="http://llm.test/v1/chat/completions",
        model="m",
        backoff_s=0.0,
        transport=httpx.MockTransport(handler),
    )
    assert provider.complete(ChatRequest(rendered_prompt="hi")) == "hello"
    assert calls["n"] == 3


def test_remote_provider_exhausts_retries():
    def handler(request: httpx.Request) -> httpx.Response:
        return httpx.Response(503, json={"error": "down"})

    provider = RemoteProvider(
        endpoint="http://llm.test/v1/chat/completions",
        model="m",
        backoff_s=0.0,
        max_attempts=3,
        transport=httpx.MockTransport(handler),
    )
    with pytest.raises(TransportError):
        provider.complete(ChatRequest(rendered_prompt="hi"))


def test_remote_provider_sends_temperature_zero():
    seen = {}

    def handler(request: httpx.Request) -> httpx.Response:
        import json

        seen.update(json.loads(request.content))
        return httpx.Response(200, json={"choices": [{"message": {"content": "ok"}}]})

    provider = RemoteProvider(
        endpoint="http://llm.test/x", model="m", transport=httpx.MockTransport(handler)
    )
    provider.complete(ChatRequest(rendered_prompt="p"))
    assert seen["temperature"] == 0.0
    assert seen["model"] == "m"
