import threading
from collections import OrderedDict
from datetime import datetime, timedelta
from typing import Any, Dict, Hashable, Optional


class CacheManager:
    def __init__(
        self,
        max_size: int = 128,
        ttl: Optional[int] = None  # Time to live in seconds, None keeps entries
    ):
        """Initialize the cache manager."""
        self.max_size = max_size
        self.ttl = ttl
        self.cache: OrderedDict = OrderedDict()
        self.timestamps: Dict[Hashable, datetime] = {}
        self.hits = 0
        self.misses = 0
        self._lock = threading.Lock()

    def get(self, key: Hashable) -> Optional[Any]:
        """Get a value from cache."""
        with self._lock:
            if key not in self.cache or self._is_expired(key):
                self._remove(key)
                self.misses += 1
                return None

            # Move to end (most recently used)
            self.cache.move_to_end(key)
            self.hits += 1
            return self.cache[key]

    def set(self, key: Hashable, value: Any) -> None:
        """Set a value in cache."""
        with self._lock:
            self._remove(key)

            if len(self.cache) >= self.max_size:
                oldest_key = next(iter(self.cache))
                self._remove(oldest_key)

            self.cache[key] = value
            self.timestamps[key] = datetime.now()

    def clear(self) -> None:
        """Clear the cache."""
        with self._lock:
            self.cache.clear()
            self.timestamps.clear()
            self.hits = 0
            self.misses = 0

    def __len__(self) -> int:
        return len(self.cache)

    def _is_expired(self, key: Hashable) -> bool:
        """Check if a cache entry is expired."""
        if self.ttl is None:
            return False
        timestamp = self.timestamps.get(key)
        if not timestamp:
            return True

        return (datetime.now() - timestamp) > timedelta(seconds=self.ttl)

    def _remove(self, key: Hashable) -> None:
        """Remove an entry from cache."""
        self.cache.pop(key, None)
        self.timestamps.pop(key, None)
