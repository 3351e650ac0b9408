"""Pluggable chat-completion and text-embedding providers, plus batch orchestration.

Remote providers speak a generic chat-completion HTTP contract; credentials
come from environment variables only. The scripted chat provider and the
character-bigram embedding make whole pipelines bit-reproducible without any
model dependency.
"""

from __future__ import annotations

import json
import os
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Mapping, Protocol, Sequence

import requests


class ProviderError(Exception):
    """Non-retryable provider failure (refusal, bad configuration, map miss)."""


class RetryableProviderError(ProviderError):
    """Transient failure (transport error, rate limit, server error)."""


@dataclass(frozen=True)
class ChatRequest:
    """One chat-completion call. Temperature defaults to 0 for reproducible runs."""

    prompt: str
    request_id: str
    temperature: float = 0.0
    max_output_tokens: int = 1024

    def __post_init__(self) -> None:
        if not self.prompt:
            raise ValueError("prompt must be non-empty")
        if self.temperature < 0:
            raise ValueError(f"temperature must be >= 0, got {self.temperature}")
        if self.max_output_tokens < 1:
            raise ValueError(f"max_output_tokens must be positive, got {self.max_output_tokens}")


@dataclass(frozen=True)
class EmbeddingVector:
    """A fixed-length embedding; providers guarantee their declared dimension."""

    values: tuple[float, ...]

    @property
    def dimension(self) -> int:
        return len(self.values)


class ChatProvider(Protocol):
    identity: str

    def chat(self, request: ChatRequest) -> str: ...


class EmbeddingProvider(Protocol):
    identity: str
    dimension: int

    def embed(self, text: str) -> EmbeddingVector: ...


class ScriptedChatProvider:
    """Deterministic provider backed by a fixed request_id -> response map."""

    identity = "scripted"

    def __init__(self, responses: Mapping[str, str]):
        self._responses = dict(responses)

    @classmethod
    def from_file(cls, path: str | Path) -> "ScriptedChatProvider":
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        if not isinstance(data, dict) or not all(isinstance(v, str) for v in data.values()):
            raise ValueError(f"scripted response file {path} must map request ids to strings")
        return cls(data)

    def chat(self, request: ChatRequest) -> str:
        try:
            return self._responses[request.request_id]
        except KeyError:
            raise ProviderError(f"no scripted response for request_id {request.request_id!r}") from None


class CharBigramEmbedding:
    """Deterministic 128-dimensional character-bigram count embedding.

    Lowercases the text, then counts adjacent character pairs into bucket
    (ord(a) * 131 + ord(b)) % 128. No normalization is applied (cosine
    normalizes). Stable across runs and platforms, so it serves as the test
    oracle for label estimation without a model dependency.
    """

    identity = "char-bigram-128"
    dimension = 128

    def embed(self, text: str) -> EmbeddingVector:
        if not text.strip():
            raise ValueError("cannot embed empty text")
        lowered = text.lower()
        counts = [0.0] * self.dimension
        for a, b in zip(lowered, lowered[1:]):
            counts[(ord(a) * 131 + ord(b)) % self.dimension] += 1.0
        return EmbeddingVector(values=tuple(counts))


class HttpChatProvider:
    """Chat-completion client for an OpenAI-style HTTP endpoint.

    The API key is read from the environment (never from config files); the
    endpoint URL, model name and auth header are configurable.
    """

    def __init__(
        self,
        endpoint: str,
        model: str,
        api_key_env: str = "CPQA_API_KEY",
        auth_header: str = "Authorization",
        auth_scheme: str = "Bearer",
        timeout: float = 60.0,
        session: requests.Session | None = None,
    ):
        self.endpoint = endpoint
        self.model = model
        self.api_key_env = api_key_env
        self.auth_header = auth_header
        self.auth_scheme = auth_scheme
        self.timeout = timeout
        self._session = session or requests.Session()
        self.identity = f"http:{model}@{endpoint}"

    def _headers(self) -> dict[str, str]:
        key = os.environ.get(self.api_key_env)
        if not key:
            raise ProviderError(f"environment variable {self.api_key_env} is not set")
        value = f"{self.auth_scheme} {key}".strip() if self.auth_scheme else key
        return {self.auth_header: value, "Content-Type": "application/json"}

    def chat(self, request: ChatRequest) -> str:
        payload = {
            "model": self.model,
            "messages": [{"role": "user", "content": request.prompt}],
            "temperature": request.temperature,
            "max_tokens": request.max_output_tokens,
        }
        try:
            response = self._session.post(
                self.endpoint, json=payload, headers=self._headers(), timeout=self.timeout
            )
        except requests.RequestException as exc:
            raise RetryableProviderError(f"transport failure: {exc}") from exc
        if response.status_code == 429 or response.status_code >= 500:
            raise RetryableProviderError(f"HTTP {response.status_code} from {self.endpoint}")
        if response.status_code != 200:
            raise ProviderError(f"HTTP {response.status_code} from {self.endpoint}: {response.text[:500]}")
        try:
            text = response.json()["choices"][0]["message"]["content"]
        except (ValueError, KeyError, IndexError, TypeError) as exc:
            raise ProviderError(f"malformed chat response: {exc}") from exc
        if not text:
            raise ProviderError("provider returned an empty response body")
        return text


class HttpEmbeddingProvider:
    """Embedding client for an OpenAI-style /embeddings HTTP endpoint."""

    def __init__(
        self,
        endpoint: str,
        model: str,
        dimension: int,
        api_key_env: str = "CPQA_API_KEY",
        auth_header: str = "Authorization",
        auth_scheme: str = "Bearer",
        timeout: float = 60.0,
        session: requests.Session | None = None,
    ):
        self.endpoint = endpoint
        self.model = model
        self.dimension = dimension
        self.api_key_env = api_key_env
        self.auth_header = auth_header
        self.auth_scheme = auth_scheme
        self.timeout = timeout
        self._session = session or requests.Session()
        self.identity = f"http:{model}@{endpoint}"

    def _headers(self) -> dict[str, str]:
        key = os.environ.get(self.api_key_env)
        if not key:
            raise ProviderError(f"environment variable {self.api_key_env} is not set")
        value = f"{self.auth_scheme} {key}".strip() if self.auth_scheme else key
        return {self.auth_header: value, "Content-Type": "application/json"}

    def embed(self, text: str) -> EmbeddingVector:
        if not text.strip():
            raise ValueError("cannot embed empty text")
        try:
            response = self._session.post(
                self.endpoint,
                json={"model": self.model, "input": text},
                headers=self._headers(),
                timeout=self.timeout,
            )
        except requests.RequestException as exc:
            raise RetryableProviderError(f"transport failure: {exc}") from exc
        if response.status_code == 429 or response.status_code >= 500:
            raise RetryableProviderError(f"HTTP {response.status_code} from {self.endpoint}")
        if response.status_code != 200:
            raise ProviderError(f"HTTP {response.status_code} from {self.endpoint}: {response.text[:500]}")
        try:
            values = response.json()["data"][0]["embedding"]
        except (ValueError, KeyError, IndexError, TypeError) as exc:
            raise ProviderError(f"malformed embedding response: {exc}") from exc
        if len(values) != self.dimension:
            raise ProviderError(
                f"provider returned dimension {len(values)}, declared {self.dimension}"
            )
        return EmbeddingVector(values=tuple(float(v) for v in values))


class SentenceTransformerEmbedding:
    """Embedding provider backed by a local sentence-transformers model.

    Requires the optional ``embeddings`` extra. Loaded lazily so the package
    imports without the model stack installed.
    """

    def __init__(self, model_name: str = "paraphrase-MiniLM-L6-v2", device: str | None = None):
        try:
            from sentence_transformers import SentenceTransformer
        except ImportError as exc:
            raise RuntimeError(
                "sentence-transformers is not installed; install the 'embeddings' extra"
            ) from exc
        self._model = SentenceTransformer(model_name, device=device)
        self.dimension = int(self._model.get_sentence_embedding_dimension())
        self.identity = f"sentence-transformer:{model_name}"

    def embed(self, text: str) -> EmbeddingVector:
        if not text.strip():
            raise ValueError("cannot embed empty text")
        vector = self._model.encode([text], convert_to_numpy=True, show_progress_bar=False)[0]
        return EmbeddingVector(values=tuple(float(v) for v in vector))


@dataclass(frozen=True)
class BatchOutcome:
    """Terminal result for one batched request: a response or a final error."""

    text: str | None
    error: str | None
    attempts: int

    @property
    def ok(self) -> bool:
        return self.error is None


def batch_generate(
    provider: ChatProvider,
    requests_: Sequence[ChatRequest],
    parallelism: int,
    retry_budget: int = 0,
    backoff_base: float = 1.0,
    backoff_factor: float = 2.0,
    sleep: Callable[[float], None] = time.sleep,
) -> dict[str, BatchOutcome]:
    """Resolve every request exactly once, with bounded parallelism and retries.

    At most ``parallelism`` requests are in flight at a time. Retryable
    failures are retried up to ``retry_budget`` times per request with
    jittered exponential backoff; any other failure is final immediately.
    One request's failure never aborts the batch: the result map always has
    exactly one outcome per request id.
    """
    if parallelism < 1:
        raise ValueError(f"parallelism must be >= 1, got {parallelism}")
    if retry_budget < 0:
        raise ValueError(f"retry_budget must be >= 0, got {retry_budget}")
    ids = [r.request_id for r in requests_]
    if len(set(ids)) != len(ids):
        raise ValueError("request_ids must be unique within a batch")
    if not requests_:
        return {}

    def resolve(request: ChatRequest) -> BatchOutcome:
        attempts = 0
        while True:
            attempts += 1
            try:
                return BatchOutcome(text=provider.chat(request), error=None, attempts=attempts)
            except RetryableProviderError as exc:
                if attempts > retry_budget:
                    return BatchOutcome(text=None, error=str(exc), attempts=attempts)
                delay = backoff_base * backoff_factor ** (attempts - 1)
                sleep(delay * random.uniform(0.5, 1.5))
            except Exception as exc:
                return BatchOutcome(text=None, error=str(exc), attempts=attempts)

    with ThreadPoolExecutor(max_workers=parallelism) as pool:
        outcomes = list(pool.map(resolve, requests_))
    return {request.request_id: outcome for request, outcome in zip(requests_, outcomes)}
