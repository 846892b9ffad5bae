"""LLM-backed spec generation: a minimal text-completion client contract.

The endpoint contract is a single HTTP POST with a JSON body
``{prompt, max_tokens, temperature}`` answered by ``{text}``; any provider
can be adapted to it. Transport failures retry with exponential backoff.
No validation happens here: generated documents flow into the validator
downstream, matching the filter-after-generate pipeline order.
"""

from __future__ import annotations

import json
import re
import time
import urllib.error
import urllib.request
from typing import Protocol

from ..errors import ClientError, EmptyCompletion
from .topics import GenerationPrompt

DEFAULT_TEMPERATURE = 0.8
DEFAULT_MAX_TOKENS = 2048

_FENCE_RE = re.compile(r"```[a-zA-Z0-9_-]*\s*\n(.*?)```", re.DOTALL)


class LLMClient(Protocol):
    def complete(self, prompt: str, max_tokens: int, temperature: float) -> str: ...


class HttpTextClient:
    """JSON-over-HTTP completion client with retries.

    Used for the spec generator, the reasoner, and the judge alike; they all
    speak the same {.. -> {text}} shape with different payload fields.
    """

    def __init__(self, url: str, token: str | None = None, retries: int = 3, backoff: float = 0.5,
                 timeout: float = 60.0):
        self.url = url
        self.token = token
        self.retries = retries
        self.backoff = backoff
        self.timeout = timeout

    def post(self, payload: dict) -> str:
        body = json.dumps(payload).encode("utf-8")
        headers = {"Content-Type": "application/json"}
        if self.token:
            headers["Authorization"] = f"Bearer {self.token}"
        last: Exception | None = None
        for attempt in range(self.retries):
            req = urllib.request.Request(self.url, data=body, headers=headers, method="POST")
            try:
                with urllib.request.urlopen(req, timeout=self.timeout) as resp:
                    reply = json.loads(resp.read().decode("utf-8"))
                    return str(reply.get("text", ""))
            except (urllib.error.URLError, urllib.error.HTTPError, json.JSONDecodeError, OSError) as exc:
                last = exc
                if attempt + 1 < self.retries:
                    time.sleep(self.backoff * (2**attempt))
        raise ClientError(f"request to {self.url} failed after {self.retries} attempts: {last}")

    def complete(self, prompt: str, max_tokens: int, temperature: float) -> str:
        return self.post({"prompt": prompt, "max_tokens": max_tokens, "temperature": temperature})


class MockLLMClient:
    """Scripted completions for hermetic tests."""

    def __init__(self, completions: list[str]):
        self._completions = list(completions)
        self.calls: list[str] = []

    def complete(self, prompt: str, max_tokens: int, temperature: float) -> str:
        self.calls.append(prompt)
        if not self._completions:
            raise ClientError("mock client exhausted")
        return self._completions.pop(0)


def strip_code_fences(text: str) -> str:
    m = _FENCE_RE.search(text)
    return m.group(1) if m else text


def generate_spec_llm(
    prompt: GenerationPrompt,
    client: LLMClient,
    max_tokens: int = DEFAULT_MAX_TOKENS,
    temperature: float = DEFAULT_TEMPERATURE,
) -> str:
    """One completion call; returns the raw document text, fences stripped."""
    text = client.complete(prompt.rendered_text, max_tokens, temperature)
    stripped = strip_code_fences(text).strip()
    if not stripped:
        raise EmptyCompletion(f"empty completion for subtype {prompt.template_ref!r}")
    return stripped
