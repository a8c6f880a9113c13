"""
Settings, serialization and persistent cache tests.
"""

from fractions import Fraction

import pytest
from pydantic import ValidationError

from drinfeld_lab.core.cache import NAMESPACES, PersistentCache, get_cache
from drinfeld_lab.core.config import Settings, get_settings, reload_settings
from drinfeld_lab.core.serialization import canonical_json, content_hash, fraction_from_json, to_jsonable


class TestSettings:
    """Environment-driven settings."""

    def test_defaults(self):
        settings = get_settings()
        assert settings.ambient_cap_factor == 24
        assert settings.density_min_places == 30
        assert settings.density_warn_sigma == 3.0
        assert settings.log_level == "INFO"

    def test_env_override(self, monkeypatch):
        monkeypatch.setenv("DRINFELD_LAB_GL_ENUMERATION_CAP", "500")
        monkeypatch.setenv("DRINFELD_LAB_LOG_LEVEL", "debug")
        settings = reload_settings()
        assert settings.gl_enumeration_cap == 500
        assert settings.log_level == "DEBUG"
        assert get_settings() is settings

    def test_invalid_log_level(self):
        with pytest.raises(ValidationError):
            Settings(log_level="LOUD")

    def test_validate_environment(self, tmp_path):
        settings = Settings(density_warn_sigma=5.0, density_fail_sigma=4.0, cache_dir=str(tmp_path))
        errors = settings.validate_environment()
        assert any("threshold" in e for e in errors)
        assert Settings(cache_dir=str(tmp_path)).validate_environment() == []


class TestSerialization:
    """Canonical JSON used for hashing and reports."""

    def test_sorted_compact(self):
        assert canonical_json({"b": 1, "a": [1, 2]}) == '{"a":[1,2],"b":1}'

    def test_fractions_are_exact(self):
        encoded = to_jsonable({"p": Fraction(2, 3)})
        assert encoded == {"p": {"num": "2", "den": "3"}}
        assert fraction_from_json(encoded["p"]) == Fraction(2, 3)

    def test_tuples_and_sets(self):
        assert to_jsonable((1, (2, 3))) == [1, [2, 3]]
        assert to_jsonable({3, 1, 2}) == [1, 2, 3]

    def test_hash_ignores_key_order(self):
        assert content_hash({"x": 1, "y": 2}) == content_hash({"y": 2, "x": 1})
        assert content_hash({"x": 1}) != content_hash({"x": 2})


class TestPersistentCache:
    """On-disk content-addressed cache."""

    def test_put_get(self, tmp_path):
        cache = PersistentCache(root=str(tmp_path))
        assert cache.get("moduli", {"q": 2, "degree": 3}) is None
        cache.put("moduli", {"q": 2, "degree": 3}, [1, 1, 0, 1])
        assert cache.get("moduli", {"q": 2, "degree": 3}) == [1, 1, 0, 1]
        assert cache.hits == 1

    def test_get_or_compute_runs_once(self, tmp_path):
        cache = PersistentCache(root=str(tmp_path))
        calls = []

        def compute():
            calls.append(1)
            return {"verdict": "full"}

        assert cache.get_or_compute("subgroups", ["k"], compute) == {"verdict": "full"}
        assert cache.get_or_compute("subgroups", ["k"], compute) == {"verdict": "full"}
        assert len(calls) == 1

    def test_inspect_and_clear(self, tmp_path):
        cache = PersistentCache(root=str(tmp_path))
        cache.put("moduli", {"q": 3, "degree": 2}, [2, 2, 1])
        cache.put("moduli", {"q": 2, "degree": 2}, [1, 1, 1])
        listing = cache.inspect()
        assert set(listing) == set(NAMESPACES)
        assert len(listing["moduli"]) == 2
        assert listing["subgroups"] == []
        assert cache.clear() == 2
        assert cache.inspect()["moduli"] == []

    def test_corrupt_entry_is_rebuilt(self, tmp_path, caplog):
        cache = PersistentCache(root=str(tmp_path))
        cache.put("moduli", ["k"], 1)
        path = cache._path("moduli", ["k"])
        path.write_text("{not json", encoding="utf-8")
        assert cache.get("moduli", ["k"]) is None
        assert not path.exists()
        assert "Corrupt cache entry" in caplog.text
        assert cache.get_or_compute("moduli", ["k"], lambda: 7) == 7

    def test_disabled_cache(self, tmp_path):
        cache = PersistentCache(root=str(tmp_path), enabled=False)
        cache.put("moduli", ["k"], 1)
        assert cache.get("moduli", ["k"]) is None

    def test_global_cache_follows_settings(self, tmp_path, monkeypatch):
        monkeypatch.setenv("DRINFELD_LAB_CACHE_DIR", str(tmp_path / "other"))
        reload_settings()
        assert get_cache().root == tmp_path / "other"
