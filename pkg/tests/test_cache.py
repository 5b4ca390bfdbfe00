"""Tests for the content-addressed result caches."""

from concurrent.futures import ThreadPoolExecutor

from blockip.cache import GRAVER_CACHE, ContentCache, _cache_key, clear_all


def test_cache_key_is_deterministic():
    assert _cache_key((1, 2), "x") == _cache_key((1, 2), "x")
    assert _cache_key((1, 2), "x") != _cache_key((2, 1), "x")
    assert len(_cache_key("a")) == 16


def test_get_or_compute_counts_hits_and_misses():
    cache = ContentCache("test")
    calls = []

    def compute():
        calls.append(1)
        return (1, 2, 3)

    assert cache.get_or_compute(("key",), compute) == (1, 2, 3)
    assert cache.get_or_compute(("key",), compute) == (1, 2, 3)
    assert len(calls) == 1
    assert (cache.hits, cache.misses) == (1, 1)
    assert len(cache) == 1


def test_first_stored_value_wins():
    cache = ContentCache("test")
    first = cache.set_cached([1], "k")
    second = cache.set_cached([2], "k")
    assert second is first
    assert cache.get_cached("k") == [1]


def test_concurrent_callers_see_one_object():
    cache = ContentCache("test")
    with ThreadPoolExecutor(max_workers=4) as pool:
        results = list(pool.map(lambda _: cache.get_or_compute(("k",), lambda: [0]), range(16)))
    assert all(r is results[0] for r in results)


def test_clear_all():
    GRAVER_CACHE.set_cached(("g",), "clear-all-marker")
    clear_all()
    assert len(GRAVER_CACHE) == 0
    assert GRAVER_CACHE.get_cached("clear-all-marker") is None
