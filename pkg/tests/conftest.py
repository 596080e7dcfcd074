import pytest

from sigmaform import cache


@pytest.fixture(autouse=True)
def _reset_cache_state(monkeypatch):
    # no test writes to a cache unless it asks for one
    monkeypatch.delenv(cache.ENV_VAR, raising=False)
    saved = dict(cache._state)
    yield
    cache._state.clear()
    cache._state.update(saved)
