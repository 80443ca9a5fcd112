"""Web search clients for the hybrid retrieval path."""

from __future__ import annotations

import logging
import threading
import time
from dataclasses import dataclass

import requests

from ..errors import QuotaExceeded, TransportFailure

logger = logging.getLogger("slideforge.retrieval")

SEARCH_KEY_ENV = "SLIDEFORGE_SEARCH_KEY"
SEARCH_CX_ENV = "SLIDEFORGE_SEARCH_CX"


@dataclass
class WebHit:
    title: str
    url: str
    snippet: str
    rank: int  # 1-based position in the search response


class WebSearchClient:
    """Interface: search(query, n) -> at most n WebHits with ranks 1..len."""

    def search(self, query: str, n: int) -> list[WebHit]:
        raise NotImplementedError


class StubWebSearchClient(WebSearchClient):
    """Scripted client: returns canned hits, or raises a scripted error."""

    def __init__(self, results: list[dict] | None = None, error: Exception | None = None):
        self.results = results or []
        self.error = error
        self.calls: list[str] = []

    def search(self, query: str, n: int) -> list[WebHit]:
        self.calls.append(query)
        if self.error is not None:
            raise self.error
        return [
            WebHit(
                title=item.get("title", ""),
                url=item.get("url") or item.get("link", ""),
                snippet=item.get("snippet", ""),
                rank=i + 1,
            )
            for i, item in enumerate(self.results[:n])
        ]


class TokenBucket:
    """Simple global rate limiter: capacity tokens refilled at rate/s."""

    def __init__(self, rate: float = 5.0, capacity: float | None = None):
        self.rate = rate
        self.capacity = capacity if capacity is not None else rate
        self._tokens = self.capacity
        self._stamp = time.monotonic()
        self._lock = threading.Lock()

    def acquire(self) -> None:
        while True:
            with self._lock:
                now = time.monotonic()
                self._tokens = min(self.capacity, self._tokens + (now - self._stamp) * self.rate)
                self._stamp = now
                if self._tokens >= 1.0:
                    self._tokens -= 1.0
                    return
                wait = (1.0 - self._tokens) / self.rate
            time.sleep(wait)


class CustomSearchClient(WebSearchClient):
    """HTTP adapter for a custom-search API.

    GET with key, cx, q, num; response JSON items[].{title, link, snippet}.
    """

    def __init__(self, api_key: str, engine_id: str,
                 endpoint: str = "https://www.googleapis.com/customsearch/v1",
                 rate_limiter: TokenBucket | None = None,
                 timeout: float = 20.0,
                 session: requests.Session | None = None):
        self.api_key = api_key
        self.engine_id = engine_id
        self.endpoint = endpoint
        self.rate_limiter = rate_limiter or TokenBucket(rate=5.0)
        self.timeout = timeout
        self._session = session or requests.Session()

    def search(self, query: str, n: int) -> list[WebHit]:
        self.rate_limiter.acquire()
        try:
            resp = self._session.get(
                self.endpoint,
                params={"key": self.api_key, "cx": self.engine_id, "q": query, "num": n},
                timeout=self.timeout,
            )
        except (requests.ConnectionError, requests.Timeout) as exc:
            raise TransportFailure(f"web search transport error: {exc}") from exc
        if resp.status_code == 429:
            raise QuotaExceeded("web search quota exhausted")
        if resp.status_code >= 400:
            raise TransportFailure(f"web search returned {resp.status_code}: {resp.text[:200]}")
        return parse_search_response(resp.json(), n)


def parse_search_response(payload: dict, n: int) -> list[WebHit]:
    """Map the API's items[].{title, link, snippet} verbatim onto WebHits."""
    hits = []
    for item in payload.get("items", [])[:n]:
        url = item.get("link", "")
        if not url:
            continue
        hits.append(WebHit(
            title=item.get("title", ""),
            url=url,
            snippet=item.get("snippet", ""),
            rank=len(hits) + 1,
        ))
    return hits
