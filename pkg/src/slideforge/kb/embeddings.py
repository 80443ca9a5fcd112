"""Embedding clients: remote HTTP service and a deterministic local stub."""

from __future__ import annotations

import hashlib
import logging
import time
import zlib

import numpy as np
import requests

from ..errors import TransportFailure

logger = logging.getLogger("slideforge.kb")

DEFAULT_DIM = 1536
MAX_BATCH = 64
RETRIES = 3
BACKOFF_SECONDS = 0.5


class EmbeddingClient:
    """Interface: embed_batch(texts) -> list of float32 vectors of fixed dim."""

    dim: int = DEFAULT_DIM
    cache_tag: str = "embed"

    def embed_batch(self, texts: list[str]) -> list[np.ndarray]:
        raise NotImplementedError

    def embed(self, text: str) -> np.ndarray:
        return self.embed_batch([text])[0]


class HashEmbeddingClient(EmbeddingClient):
    """Deterministic stub: character trigrams hashed into dim buckets, L2-normalized.

    Same text always produces the same vector; no network involved.
    """

    def __init__(self, dim: int = DEFAULT_DIM):
        self.dim = dim
        self.cache_tag = f"hash:{dim}"

    def embed_batch(self, texts: list[str]) -> list[np.ndarray]:
        return [self._embed_one(t) for t in texts]

    def _embed_one(self, text: str) -> np.ndarray:
        vec = np.zeros(self.dim, dtype=np.float32)
        if text:
            grams = [text[i: i + 3] for i in range(len(text) - 2)] if len(text) >= 3 else [text]
            for gram in grams:
                vec[zlib.crc32(gram.encode("utf-8")) % self.dim] += 1.0
            norm = float(np.linalg.norm(vec))
            if norm > 0:
                vec /= norm
        return vec


class RemoteEmbeddingClient(EmbeddingClient):
    """HTTP adapter: POST {model, input: [texts]} -> {data: [{embedding: [...]}]}.

    Batches at most MAX_BATCH texts per call and retries transient
    transport failures with exponential backoff.
    """

    def __init__(self, url: str, model: str, api_key: str = "", dim: int = DEFAULT_DIM,
                 timeout: float = 30.0, session: requests.Session | None = None):
        self.url = url
        self.model = model
        self.api_key = api_key
        self.dim = dim
        self.timeout = timeout
        self.cache_tag = f"remote:{url}:{model}"
        self._session = session or requests.Session()

    def embed_batch(self, texts: list[str]) -> list[np.ndarray]:
        out: list[np.ndarray] = []
        for i in range(0, len(texts), MAX_BATCH):
            out.extend(self._call(texts[i: i + MAX_BATCH]))
        return out

    def _call(self, batch: list[str]) -> list[np.ndarray]:
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        last_error: Exception | None = None
        for attempt in range(RETRIES):
            try:
                resp = self._session.post(
                    self.url,
                    json={"model": self.model, "input": batch},
                    headers=headers,
                    timeout=self.timeout,
                )
                if resp.status_code >= 500:
                    last_error = TransportFailure(f"embedding service returned {resp.status_code}")
                elif resp.status_code >= 400:
                    raise TransportFailure(f"embedding request rejected: {resp.status_code} {resp.text[:200]}")
                else:
                    data = resp.json()["data"]
                    if len(data) != len(batch):
                        raise TransportFailure(
                            f"embedding count mismatch: sent {len(batch)}, got {len(data)}"
                        )
                    vectors = []
                    for item in data:
                        vec = np.asarray(item["embedding"], dtype=np.float32)
                        if vec.shape != (self.dim,):
                            raise TransportFailure(f"expected dim {self.dim}, got {vec.shape}")
                        vectors.append(vec)
                    return vectors
            except (requests.ConnectionError, requests.Timeout) as exc:
                last_error = TransportFailure(f"embedding transport error: {exc}")
            if attempt < RETRIES - 1:
                time.sleep(BACKOFF_SECONDS * 2 ** attempt)
        raise last_error  # type: ignore[misc]


class CachingEmbeddingClient(EmbeddingClient):
    """Wraps another client with a byte cache keyed by text hash."""

    def __init__(self, inner: EmbeddingClient, cache):
        self.inner = inner
        self.cache = cache
        self.dim = inner.dim
        self.cache_tag = inner.cache_tag

    def _key(self, text: str) -> str:
        digest = hashlib.sha256(text.encode("utf-8")).hexdigest()
        return f"emb:{self.inner.cache_tag}:{digest}"

    def embed_batch(self, texts: list[str]) -> list[np.ndarray]:
        out: list[np.ndarray | None] = []
        missing: list[str] = []
        positions: list[int] = []
        for i, text in enumerate(texts):
            blob = self.cache.get(self._key(text))
            if blob is not None:
                out.append(np.frombuffer(blob, dtype=np.float32).copy())
            else:
                out.append(None)
                missing.append(text)
                positions.append(i)
        if missing:
            fresh = self.inner.embed_batch(missing)
            for pos, text, vec in zip(positions, missing, fresh):
                out[pos] = vec
                self.cache.put(self._key(text), vec.astype(np.float32).tobytes())
        return out  # type: ignore[return-value]
