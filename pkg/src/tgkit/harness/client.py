"""Model querying with retries, a rate cap, and bounded parallelism.

Endpoints speak the chat-completions JSON convention over HTTP. A base URL of
``mock://<path>`` short-circuits to a scripted replies file (JSON mapping a
query tag — usually the graph id — to canned text, with ``"*"`` as fallback),
which is how the whole pipeline runs offline.

Credentials come only from the environment variable the endpoint names; they
are never read from manifests or written anywhere.
"""

import json
import os
import threading
import time
from dataclasses import dataclass
from typing import Optional

import httpx

from ..errors import (
    AuthError,
    RateLimited,
    RequestTimeout,
    TransportError,
)

_RETRY_STATUSES = frozenset((429, 500, 502, 503, 504))


@dataclass
class ModelEndpoint:
    base_url: str
    model: str
    auth_env: Optional[str] = None
    timeout: float = 60.0
    max_retries: int = 3
    parallelism: int = 1
    rate_per_minute: int = 60
    retry_base_s: float = 1.0

    def __post_init__(self):
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")
        if self.parallelism < 1:
            raise ValueError("parallelism must be >= 1")

    @property
    def is_mock(self) -> bool:
        return self.base_url.startswith("mock://")


class _RateLimiter:
    """Spaces request starts at least 60/rate_per_minute seconds apart."""

    def __init__(self, rate_per_minute: int, sleeper=time.sleep):
        self._interval = 60.0 / rate_per_minute if rate_per_minute else 0.0
        self._lock = threading.Lock()
        self._next_start = 0.0
        self._sleep = sleeper

    def wait(self):
        if not self._interval:
            return
        with self._lock:
            now = time.monotonic()
            delay = self._next_start - now
            self._next_start = max(now, self._next_start) + self._interval
        if delay > 0:
            self._sleep(delay)


class EndpointClient:
    """One endpoint's shared transport, limiter, and parallelism gate."""

    def __init__(self, endpoint: ModelEndpoint, transport=None, sleeper=time.sleep):
        self.endpoint = endpoint
        self._sleep = sleeper
        self._limiter = _RateLimiter(endpoint.rate_per_minute, sleeper)
        self._gate = threading.Semaphore(endpoint.parallelism)
        self._replies = None
        if endpoint.is_mock:
            with open(endpoint.base_url[len("mock://"):], encoding="utf-8") as fh:
                self._replies = json.load(fh)
        else:
            self._http = httpx.Client(timeout=endpoint.timeout, transport=transport)

    def close(self):
        if self._replies is None:
            self._http.close()

    def query(self, prompt: str, tag: Optional[str] = None) -> str:
        """Model text for a prompt; ``tag`` selects the scripted mock reply."""
        if self._replies is not None:
            reply = self._replies.get(tag if tag is not None else "*",
                                      self._replies.get("*"))
            if reply is None:
                raise TransportError(f"mock replies file has no entry for {tag!r}")
            return reply
        headers = self._auth_headers()
        with self._gate:
            return self._post_with_retries(prompt, headers)

    def _auth_headers(self) -> dict:
        env = self.endpoint.auth_env
        if env is None:
            return {}
        credential = os.environ.get(env)
        if not credential:
            raise AuthError(f"credential variable {env} is not set")
        return {"Authorization": f"Bearer {credential}"}

    def _post_with_retries(self, prompt: str, headers: dict) -> str:
        url = self.endpoint.base_url.rstrip("/") + "/chat/completions"
        payload = {
            "model": self.endpoint.model,
            "messages": [{"role": "user", "content": prompt}],
        }
        last_error = None
        for attempt in range(self.endpoint.max_retries + 1):
            if attempt:
                self._sleep(self.endpoint.retry_base_s * 2 ** (attempt - 1))
            self._limiter.wait()
            try:
                response = self._http.post(url, json=payload, headers=headers)
            except httpx.TimeoutException as exc:
                last_error = RequestTimeout(f"request timed out: {exc}")
                continue
            except httpx.HTTPError as exc:
                last_error = TransportError(f"transport failure: {exc}")
                continue
            if response.status_code == 200:
                return _extract_text(response)
            if response.status_code in (401, 403):
                raise AuthError(f"endpoint rejected credentials "
                                f"({response.status_code})")
            if response.status_code in _RETRY_STATUSES:
                kind = RateLimited if response.status_code == 429 else TransportError
                last_error = kind(f"HTTP {response.status_code}")
                continue
            raise TransportError(f"HTTP {response.status_code}: {response.text[:200]}")
        raise last_error

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def _extract_text(response) -> str:
    try:
        return response.json()["choices"][0]["message"]["content"]
    except (KeyError, IndexError, TypeError, ValueError) as exc:
        raise TransportError(f"malformed completion payload: {exc}") from None


def query(endpoint: ModelEndpoint, prompt: str, tag: Optional[str] = None,
          transport=None, sleeper=time.sleep) -> str:
    """One-shot convenience wrapper around :class:`EndpointClient`."""
    with EndpointClient(endpoint, transport=transport, sleeper=sleeper) as client:
        return client.query(prompt, tag=tag)
