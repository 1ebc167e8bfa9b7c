"""
Persistence of the cyclotomic cache between runs.
One `n<TAB>poly` line per entry, the polynomial in the rendering grammar.
"""

import logging
import os
from typing import Optional

from qcong.config import settings
from qcong.errors import ParseError
from qcong.services.cyclotomic import CyclotomicCache, totient
from qcong.services.polyring import parse_poly, render

logger = logging.getLogger(__name__)


def cache_path(directory: Optional[str] = None) -> Optional[str]:
    """Path of the cache file, or None when no cache directory is configured."""
    directory = directory or settings.CACHE_DIR
    if not directory:
        return None
    return os.path.join(directory, settings.CACHE_FILE_NAME)


def load_cache(directory: Optional[str] = None) -> CyclotomicCache:
    """
    Load a persisted cyclotomic cache.

    Lines that fail to parse or whose polynomial is not monic of degree
    totient(n) are skipped with a warning; the entry is recomputed on demand.

    Args:
        directory: Cache directory (defaults to QCONG_CACHE_DIR)

    Returns:
        A writable cache, empty when nothing could be loaded
    """
    cache = CyclotomicCache()
    path = cache_path(directory)
    if path is None or not os.path.exists(path):
        return cache

    skipped = 0
    try:
        with open(path, "r", encoding="utf-8") as handle:
            for line_no, line in enumerate(handle, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    index_text, poly_text = line.split("\t", 1)
                    n = int(index_text)
                    poly = parse_poly(poly_text)
                except (ValueError, ParseError) as e:
                    logger.warning(f"Skipping cache line {line_no} in {path}: {e}")
                    skipped += 1
                    continue
                if n < 1 or poly.degree != totient(n) or poly.lc != 1:
                    logger.warning(
                        f"Skipping cache line {line_no} in {path}: "
                        f"not a monic polynomial of degree totient({n})"
                    )
                    skipped += 1
                    continue
                cache.put(n, poly)
    except OSError as e:
        logger.warning(f"Could not read cyclotomic cache {path}: {e}")
        return CyclotomicCache()

    logger.info(f"Loaded {len(cache)} cyclotomic entries from {path} ({skipped} skipped)")
    return cache


def save_cache(cache: CyclotomicCache, directory: Optional[str] = None) -> Optional[str]:
    """
    Write the cache to disk.

    Returns:
        The file written, or None when no cache directory is configured
    """
    path = cache_path(directory)
    if path is None:
        return None
    try:
        os.makedirs(os.path.dirname(path), exist_ok=True)
        tmp_path = f"{path}.tmp"
        with open(tmp_path, "w", encoding="utf-8") as handle:
            for n, poly in cache.entries():
                handle.write(f"{n}\t{render(poly)}\n")
        os.replace(tmp_path, path)
    except OSError as e:
        logger.warning(f"Could not write cyclotomic cache {path}: {e}")
        return None
    logger.info(f"Saved {len(cache)} cyclotomic entries to {path}")
    return path
