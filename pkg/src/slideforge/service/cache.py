"""In-process byte cache with per-entry TTL."""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass

DEFAULT_TTL_SECONDS = 3600.0


@dataclass
class CacheEntry:
    key: str
    value: bytes
    expires_at: float


class TtlCache:
    """Key -> bytes with expiry; expired entries are never served.

    The clock is injectable so tests can advance time deterministically.
    """

    def __init__(self, ttl_seconds: float = DEFAULT_TTL_SECONDS, clock=time.monotonic):
        self.ttl_seconds = ttl_seconds
        self.clock = clock
        self.hits = 0
        self.misses = 0
        self._entries: dict[str, CacheEntry] = {}
        self._lock = threading.Lock()

    def get(self, key: str) -> bytes | None:
        with self._lock:
            entry = self._entries.get(key)
            if entry is None or entry.expires_at <= self.clock():
                if entry is not None:
                    del self._entries[key]
                self.misses += 1
                return None
            self.hits += 1
            return entry.value

    def put(self, key: str, value: bytes, ttl_seconds: float | None = None) -> None:
        ttl = self.ttl_seconds if ttl_seconds is None else ttl_seconds
        with self._lock:
            self._entries[key] = CacheEntry(key, value, self.clock() + ttl)

    def purge_expired(self) -> int:
        now = self.clock()
        with self._lock:
            stale = [k for k, e in self._entries.items() if e.expires_at <= now]
            for key in stale:
                del self._entries[key]
            return len(stale)

    def __len__(self) -> int:
        return len(self._entries)
