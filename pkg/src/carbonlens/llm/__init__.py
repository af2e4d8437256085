from carbonlens.llm.templates import PromptTemplate, get_template, render_prompt, registry
from carbonlens.llm.provider import (
    ChatRequest,
    LlmProvider,
    RemoteProvider,
    ScriptedProvider,
    complete,
)
from carbonlens.llm.budget import TokenBudget, trim_context

__all__ = [
    "PromptTemplate",
    "get_template",
    "render_prompt",
    "registry",
    "ChatRequest",
    "LlmProvider",
    "RemoteProvider",
    "ScriptedProvider",
    "complete",
    "TokenBudget",
    "trim_context",
]
