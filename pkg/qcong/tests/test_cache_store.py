"""
Test persistence of the cyclotomic cache.
"""
import os

from qcong.config import settings
from qcong.services.cache_store import cache_path, load_cache, save_cache
from qcong.services.cyclotomic import CyclotomicCache
from qcong.services.polyring import IntPoly


class TestCacheStore:
    """Test saving and loading the cache file."""

    def test_no_directory_configured(self, monkeypatch):
        """Test that nothing is read or written without a cache directory."""
        monkeypatch.setattr(settings, "CACHE_DIR", None)
        assert cache_path() is None
        assert len(load_cache()) == 0
        assert save_cache(CyclotomicCache().warm_up(3)) is None

    def test_save_then_load(self, tmp_path):
        """Test that a saved cache loads back with identical entries."""
        cache = CyclotomicCache().warm_up(30)
        path = save_cache(cache, str(tmp_path))
        assert path == os.path.join(str(tmp_path), settings.CACHE_FILE_NAME)

        loaded = load_cache(str(tmp_path))
        assert not loaded.frozen
        assert list(loaded.entries()) == list(cache.entries())

    def test_file_format(self, tmp_path):
        """Test the n<TAB>polynomial line format."""
        save_cache(CyclotomicCache().warm_up(3), str(tmp_path))
        with open(cache_path(str(tmp_path)), encoding="utf-8") as handle:
            lines = handle.read().splitlines()
        assert lines == ["1\t-1 + q", "2\t1 + q", "3\t1 + q + q^2"]

    def test_bad_lines_are_skipped(self, tmp_path):
        """Test that malformed or inconsistent lines are skipped, not trusted."""
        path = os.path.join(str(tmp_path), settings.CACHE_FILE_NAME)
        with open(path, "w", encoding="utf-8") as handle:
            handle.write("1\t-1 + q\n")
            handle.write("not a line\n")
            handle.write("3\t1 + x\n")
            handle.write("5\t1 + q\n")  # wrong degree
            handle.write("\n")
            handle.write("6\t1 - q + q^2\n")

        loaded = load_cache(str(tmp_path))
        assert sorted(n for n, _ in loaded.entries()) == [1, 6]
        assert loaded.get(6) == IntPoly([1, -1, 1])
        assert loaded.get(5) == IntPoly([1] * 5)

    def test_unwritable_directory(self, tmp_path, mocker):
        """Test that a failed write is logged and reported as None."""
        mocker.patch("qcong.services.cache_store.os.replace", side_effect=OSError("read-only"))
        assert save_cache(CyclotomicCache().warm_up(3), str(tmp_path)) is None
