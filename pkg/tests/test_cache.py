import glob
import os

import pytest

from sigmaform import cache
from sigmaform.catalog import build_group
from sigmaform.classes import Context
from sigmaform.lattice import modularity_suite
from sigmaform.permcore import PermGroup, fingerprint, normal_subgroups
from sigmaform.universe import standard_universe


def fresh(name):
    # a new object has no in-memory invariants, so reads go to disk
    g = build_group(name)
    return PermGroup(g.degree, g.generators)


def test_round_trip(tmp_path):
    cache.configure(str(tmp_path))
    g = fresh("S4")
    n1 = sorted(n.order for n in normal_subgroups(g))
    assert glob.glob(str(tmp_path / "*.json"))
    before = cache.stats()["hits"]
    n2 = sorted(n.order for n in normal_subgroups(fresh("S4")))
    assert n1 == n2 == [1, 4, 12, 24]
    assert cache.stats()["hits"] > before


def test_fingerprint_survives_the_cache(tmp_path):
    cache.configure(str(tmp_path))
    a = fingerprint(fresh("A4"))
    assert fingerprint(fresh("A4")) == a


@pytest.mark.parametrize("damage", [lambda s: s[: len(s) // 2], lambda s: "[1, 2]", lambda s: ""])
def test_damaged_entry_warns_and_recomputes(tmp_path, damage):
    cache.configure(str(tmp_path))
    normal_subgroups(fresh("D4"))
    (path,) = glob.glob(str(tmp_path / "*.json"))
    with open(path) as fh:
        text = fh.read()
    with open(path, "w") as fh:
        fh.write(damage(text))
    with pytest.warns(RuntimeWarning, match="corrupt cache entry"):
        normals = normal_subgroups(fresh("D4"))
    assert len(normals) == 6


def test_disabled_cache_writes_nothing(tmp_path):
    cache.configure(str(tmp_path), enabled=False)
    normal_subgroups(fresh("S4"))
    assert os.listdir(tmp_path) == []


def test_verdicts_do_not_depend_on_the_cache(tmp_path):
    u = standard_universe(24)
    cache.configure(None, enabled=False)
    off = modularity_suite(u, samples=3, seed=5, ctx=Context()).text()
    cache.configure(str(tmp_path))
    cold = modularity_suite(u, samples=3, seed=5, ctx=Context()).text()
    warm = modularity_suite(u, samples=3, seed=5, ctx=Context()).text()
    assert off == cold == warm


def test_universe_reload_keeps_record_order(tmp_path):
    from sigmaform import universe

    cache.configure(str(tmp_path))
    saved = dict(universe._UNIVERSES)
    try:
        universe._UNIVERSES.clear()
        built = [(r.name, r.cid) for r in universe.standard_universe(12)]
        universe._UNIVERSES.clear()
        loaded = [(r.name, r.cid) for r in universe.standard_universe(12)]
    finally:
        universe._UNIVERSES.clear()
        universe._UNIVERSES.update(saved)
    assert built == loaded


def test_warm_cache_speeds_up_t9(tmp_path):
    import subprocess
    import sys
    import time

    def timed():
        t0 = time.perf_counter()
        proc = subprocess.run([sys.executable, "-m", "sigmaform", "verify", "--suite", "t9",
                               "--cache-dir", str(tmp_path)], capture_output=True, text=True, check=True)
        return time.perf_counter() - t0, proc.stdout

    cold, out1 = timed()
    warm, out2 = timed()
    print(f"t9 cold {cold:.2f}s warm {warm:.2f}s speedup {cold / warm:.2f}x")
    assert out1 == out2
    assert cold / warm >= 2.0
