"""Content-addressed in-memory result caches.

Keys are derived from the canonical repr of the inputs plus a version tag, hashed with
SHA-256. Inserts are serialized; computation runs outside the lock and the first stored
value wins, so concurrent callers always observe the same object.
"""

from __future__ import annotations

import hashlib
import logging
import threading
from typing import Any, Callable, TypeVar

logger = logging.getLogger(__name__)

CACHE_VERSION = "v1"  # Bump when a cached algorithm changes its output

T = TypeVar("T")


def _cache_key(*parts: Any) -> str:
    """Generate a deterministic cache key."""
    content = "|".join(repr(p) for p in parts) + f"|{CACHE_VERSION}"
    return hashlib.sha256(content.encode("utf-8")).hexdigest()[:16]


class ContentCache:
    """A named, thread-safe memo table."""

    def __init__(self, name: str):
        self.name = name
        self._entries: dict[str, Any] = {}
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0

    def get_cached(self, *parts: Any) -> Any | None:
        key = _cache_key(*parts)
        with self._lock:
            value = self._entries.get(key)
            if value is not None:
                self.hits += 1
            return value

    def set_cached(self, value: T, *parts: Any) -> T:
        key = _cache_key(*parts)
        with self._lock:
            return self._entries.setdefault(key, value)

    def get_or_compute(self, parts: tuple, compute: Callable[[], T]) -> T:
        cached = self.get_cached(*parts)
        if cached is not None:
            return cached
        with self._lock:
            self.misses += 1
        value = compute()
        return self.set_cached(value, *parts)

    def clear(self) -> None:
        with self._lock:
            self._entries.clear()
            self.hits = self.misses = 0

    def __len__(self) -> int:
        return len(self._entries)


GRAVER_CACHE = ContentCache("graver")
MINIMAL_SOLUTIONS_CACHE = ContentCache("minimal-solutions")
CERTIFICATE_CACHE = ContentCache("certificate")
FRACTIONALITY_CACHE = ContentCache("fractionality")


def clear_all() -> None:
    """Drop every cached result (used between independent test runs)."""
    for cache in (GRAVER_CACHE, MINIMAL_SOLUTIONS_CACHE, CERTIFICATE_CACHE, FRACTIONALITY_CACHE):
        logger.debug(f"clearing {cache.name} cache ({len(cache)} entries)")
        cache.clear()
