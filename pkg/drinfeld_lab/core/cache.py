"""
Persistent Cache

Content-addressed JSON entries under the configured cache directory. Every
entry stores its own key so the cache can be inspected; entries are written
atomically so concurrent readers never observe a partial file.
"""

import json
import logging
import os
import tempfile
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

from drinfeld_lab.core.config import get_settings
from drinfeld_lab.core.exceptions import CacheError
from drinfeld_lab.core.serialization import canonical_json, content_hash

logger = logging.getLogger(__name__)

NAMESPACES = ("moduli", "subgroups")


class PersistentCache:
    """
    Namespaced key/value store on disk.

    Keys are arbitrary JSON-serializable values; the file name is the sha256
    of the canonical JSON of (namespace, key).
    """

    def __init__(self, root: Optional[str] = None, enabled: Optional[bool] = None):
        settings = get_settings()
        self.root = Path(root or settings.cache_dir)
        self.enabled = settings.cache_enabled if enabled is None else enabled
        self.hits = 0
        self.misses = 0

    def _path(self, namespace: str, key: Any) -> Path:
        digest = content_hash({"namespace": namespace, "key": key})
        return self.root / namespace / f"{digest}.json"

    def get(self, namespace: str, key: Any) -> Optional[Any]:
        """Return the cached value or None; corrupt entries are removed."""
        if not self.enabled:
            return None

        path = self._path(namespace, key)
        if not path.exists():
            self.misses += 1
            return None

        try:
            entry = self._read_entry(path)
            if canonical_json(entry["key"]) != canonical_json(key):
                raise CacheError("Cache key mismatch", {"path": str(path)})
            self.hits += 1
            return entry["value"]
        except CacheError as e:
            logger.warning(f"Corrupt cache entry {path.name} in {namespace}: {e.message}; rebuilding")
            try:
                path.unlink()
            except OSError:
                pass
            self.misses += 1
            return None

    def put(self, namespace: str, key: Any, value: Any) -> None:
        if not self.enabled:
            return

        path = self._path(namespace, key)
        path.parent.mkdir(parents=True, exist_ok=True)
        payload = canonical_json({"namespace": namespace, "key": key, "value": value})

        fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=".tmp-", suffix=".json")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as handle:
                handle.write(payload)
            os.replace(tmp_name, path)
        except OSError as e:
            logger.warning(f"Could not write cache entry {path.name}: {e}")
            try:
                os.unlink(tmp_name)
            except OSError:
                pass

    def get_or_compute(self, namespace: str, key: Any, compute: Callable[[], Any]) -> Any:
        value = self.get(namespace, key)
        if value is None:
            value = compute()
            self.put(namespace, key, value)
        return value

    def inspect(self) -> Dict[str, List[Any]]:
        """List the keys present per namespace."""
        listing: Dict[str, List[Any]] = {}
        for namespace in NAMESPACES:
            keys = []
            directory = self.root / namespace
            if directory.is_dir():
                for path in sorted(directory.glob("*.json")):
                    try:
                        keys.append(self._read_entry(path)["key"])
                    except CacheError:
                        logger.warning(f"Unreadable cache entry {path.name} in {namespace}")
            listing[namespace] = sorted(keys, key=canonical_json)
        return listing

    def clear(self) -> int:
        """Remove every cache entry. Returns the number of files removed."""
        removed = 0
        for namespace in NAMESPACES:
            directory = self.root / namespace
            if not directory.is_dir():
                continue
            for path in directory.glob("*.json"):
                try:
                    path.unlink()
                    removed += 1
                except OSError as e:
                    logger.warning(f"Could not remove {path}: {e}")
        logger.info(f"Cleared {removed} cache entries from {self.root}")
        return removed

    @staticmethod
    def _read_entry(path: Path) -> Dict[str, Any]:
        try:
            with open(path, "r", encoding="utf-8") as handle:
                entry = json.load(handle)
        except (OSError, json.JSONDecodeError) as e:
            raise CacheError(f"Unreadable cache entry: {e}", {"path": str(path)})
        if not isinstance(entry, dict) or "key" not in entry or "value" not in entry:
            raise CacheError("Malformed cache entry", {"path": str(path)})
        return entry


_global_cache: Optional[PersistentCache] = None


def get_cache() -> PersistentCache:
    """Get the global cache, rebuilt when the configured directory changes."""
    global _global_cache
    settings = get_settings()
    if (
        _global_cache is None
        or str(_global_cache.root) != str(Path(settings.cache_dir))
        or _global_cache.enabled != settings.cache_enabled
    ):
        _global_cache = PersistentCache()
    return _global_cache
