"""Language-model backends: a deterministic mock and an HTTP streaming client."""

from __future__ import annotations

import abc
import json
import os
from pathlib import Path
from typing import Iterator, List, Optional, Sequence

from .prompts import PromptBundle


class LLMError(RuntimeError):
    pass


class LLMBackend(abc.ABC):
    @abc.abstractmethod
    def stream(self, bundle: PromptBundle) -> Iterator[str]:
        """Yield response text chunks in order."""


class MockLLMBackend(LLMBackend):
    """Replays canned responses; each request consumes the next one and the
    last response repeats when the script runs out."""

    def __init__(self, responses: Sequence[Sequence[str]]):
        if not responses:
            raise ValueError("need at least one canned response")
        self.responses: List[List[str]] = [list(r) for r in responses]
        self.requests: List[PromptBundle] = []

    @classmethod
    def from_fixture(cls, path) -> "MockLLMBackend":
        """Load responses from a JSON fixture: a list of chunk lists."""
        data = json.loads(Path(path).read_text())
        return cls(data)

    def stream(self, bundle: PromptBundle) -> Iterator[str]:
        index = min(len(self.requests), len(self.responses) - 1)
        self.requests.append(bundle)
        yield from self.responses[index]


class HttpLLMBackend(LLMBackend):
    """OpenAI-style chat-completions streaming over HTTP.

    The API key is read from the environment (never from config files);
    a custom httpx client can be injected for testing.
    """

    def __init__(
        self,
        endpoint_url: str,
        model: str,
        api_key_env: str = "CHESSARM_LLM_API_KEY",
        client=None,
        timeout: float = 60.0,
    ):
        self.endpoint_url = endpoint_url
        self.model = model
        self.api_key_env = api_key_env
        self.timeout = timeout
        self._client = client

    def _headers(self) -> dict:
        headers = {"Content-Type": "application/json"}
        key = os.environ.get(self.api_key_env)
        if key:
            headers["Authorization"] = f"Bearer {key}"
        return headers

    def stream(self, bundle: PromptBundle) -> Iterator[str]:
        import httpx

        body = {
            "model": self.model,
            "messages": [
                {"role": "system", "content": bundle.system},
                {"role": "user", "content": bundle.user_message()},
            ],
            "stream": True,
        }
        client = self._client or httpx.Client(timeout=self.timeout)
        try:
            with client.stream(
                "POST", self.endpoint_url, headers=self._headers(), json=body
            ) as response:
                if response.status_code != 200:
                    raise LLMError(f"endpoint returned {response.status_code}")
                for line in response.iter_lines():
                    chunk = _parse_sse_line(line)
                    if chunk:
                        yield chunk
        except LLMError:
            raise
        except Exception as exc:
            raise LLMError(f"stream failed: {exc}") from exc
        finally:
            if self._client is None:
                client.close()


def _parse_sse_line(line: str) -> Optional[str]:
    line = line.strip()
    if not line.startswith("data:"):
        return None
    payload = line[len("data:") :].strip()
    if payload == "[DONE]":
        return None
    try:
        data = json.loads(payload)
    except json.JSONDecodeError:
        return None
    choices = data.get("choices") or []
    if not choices:
        return None
    delta = choices[0].get("delta") or {}
    return delta.get("content")
