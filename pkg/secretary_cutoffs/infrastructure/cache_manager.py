"""
Persistent cache for sweep results
"""

import json
import logging
import threading
import time
from pathlib import Path
from typing import Any, Dict, Optional

from secretary_cutoffs.models import CacheEntry
from secretary_cutoffs.output.file_manager import FileManager


class ResultCache:
    """
    Sweep records keyed by (objective, n, quadrature config)

    With a path the cache is loaded on start and rewritten after every set,
    so a sweep interrupted halfway resumes from its finished grid points.
    Safe to share between the threads of one sweep.
    """

    def __init__(self, path: Optional[Path] = None, file_manager: Optional[FileManager] = None):
        """
        Initialize cache

        Args:
            path: JSON file backing the cache (in-memory only if None)
            file_manager: Writer used for persisting
        """
        self.path = path
        self.file_manager = file_manager or FileManager()
        self._entries: Dict[str, CacheEntry] = {}
        self._lock = threading.Lock()
        self._hits = 0
        self._misses = 0
        self.logger = logging.getLogger(__name__)

        if path is not None:
            self._load()

    @staticmethod
    def make_key(objective: str, n: int, config_key: str) -> str:
        return f"{objective}|n={n}|{config_key}"

    def get(self, key: str) -> Optional[Dict[str, Any]]:
        """
        Get cached value

        Args:
            key: Cache key

        Returns:
            Stored value or None if not found
        """
        with self._lock:
            entry = self._entries.get(key) if key else None
            if entry is None:
                self._misses += 1
                return None
            self._hits += 1
        self.logger.debug(f"Cache hit: {key}")
        return dict(entry.value)

    def set(self, key: str, value: Dict[str, Any]) -> bool:
        """
        Store value and persist the cache

        Args:
            key: Cache key
            value: JSON-serializable mapping

        Returns:
            True if stored
        """
        if not key or value is None:
            return False

        with self._lock:
            self._entries[key] = CacheEntry(value=dict(value), created=time.time())
            self._persist()

        self.logger.debug(f"Cache set: {key}")
        return True

    def clear(self) -> None:
        """Clear all cache entries"""
        with self._lock:
            self._entries.clear()
            self._hits = 0
            self._misses = 0
            self._persist()
        self.logger.debug("Cache cleared")

    @property
    def size(self) -> int:
        return len(self._entries)

    def stats(self) -> Dict[str, Any]:
        """
        Get cache statistics

        Returns:
            Dict with cache statistics
        """
        total_requests = self._hits + self._misses
        hit_rate = (self._hits / total_requests * 100) if total_requests > 0 else 0

        return {"size": self.size, "hits": self._hits, "misses": self._misses, "hit_rate": f"{hit_rate:.2f}%"}

    def _load(self) -> None:
        text = self.file_manager.read_text(self.path)
        if text is None:
            return
        try:
            raw = json.loads(text)
            entries = {key: CacheEntry(value=item["value"], created=item.get("created", 0.0)) for key, item in raw.items()}
            self._entries = {key: entry for key, entry in entries.items() if isinstance(entry.value, dict)}
            if len(self._entries) < len(entries):
                self.logger.warning(f"Dropped {len(entries) - len(self._entries)} cache entries without a mapping value")
            self.logger.info(f"Loaded {len(self._entries)} cached results from {self.path}")
        except (ValueError, KeyError, TypeError, AttributeError) as e:
            self.logger.warning(f"Ignoring unreadable cache {self.path}: {e}")
            self._entries = {}

    def _persist(self) -> None:
        if self.path is None:
            return
        payload = {key: {"value": entry.value, "created": entry.created} for key, entry in self._entries.items()}
        self.file_manager.write_atomic(self.path, json.dumps(payload, indent=2, sort_keys=True) + "\n")
