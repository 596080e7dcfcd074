"""On-disk cache of per-group invariants, keyed by a fingerprint of the generators.

Enabled by setting SIGMAFORM_CACHE_DIR (or calling ``configure``).  Entries
are small JSON files; unreadable ones are reported with a warning and ignored.
"""
from __future__ import annotations

import hashlib
import json
import os
import warnings

ENV_VAR = "SIGMAFORM_CACHE_DIR"

_state = {"dir": None, "enabled": None, "hits": 0, "misses": 0}


def configure(directory: str | None, enabled: bool = True) -> None:
    _state["dir"] = directory
    _state["enabled"] = enabled and directory is not None


def _directory() -> str | None:
    if _state["enabled"] is False:
        return None
    d = _state["dir"] or os.environ.get(ENV_VAR)
    return d or None


def group_key(g) -> str:
    text = f"{g.degree}|" + "|".join(",".join(map(str, p.images)) for p in g.generators)
    return hashlib.sha256(text.encode()).hexdigest()[:32]


def _path(g) -> str | None:
    d = _directory()
    if d is None:
        return None
    return os.path.join(d, group_key(g) + ".json")


def _read(path: str) -> dict | None:
    if not os.path.exists(path):
        return None
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        if not isinstance(data, dict):
            raise ValueError("not a JSON object")
        return data
    except (OSError, ValueError) as exc:
        warnings.warn(f"ignoring corrupt cache entry {path}: {exc}", RuntimeWarning, stacklevel=3)
        return None


def _update(g, field: str, value) -> None:
    path = _path(g)
    if path is None:
        return
    os.makedirs(os.path.dirname(path), exist_ok=True)
    data = _read(path) or {}
    data[field] = value
    tmp = path + f".tmp{os.getpid()}"
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump(data, fh)
    os.replace(tmp, path)


def load(g, field: str):
    path = _path(g)
    if path is None:
        return None
    data = _read(path)
    if data is None or field not in data:
        _state["misses"] += 1
        return None
    _state["hits"] += 1
    return data[field]


def load_normals(g):
    return load(g, "normal_subgroups")


def store_normals(g, normals) -> None:
    _update(g, "normal_subgroups", normals)


def store(g, field: str, value) -> None:
    _update(g, field, value)


def enabled() -> bool:
    return _directory() is not None


def _named_path(name: str) -> str | None:
    d = _directory()
    return None if d is None else os.path.join(d, name + ".json")


def load_named(name: str):
    """A whole-object entry (e.g. a built universe) stored under a fixed name."""
    path = _named_path(name)
    data = _read(path) if path else None
    if data is None:
        _state["misses"] += path is not None
        return None
    _state["hits"] += 1
    return data.get("value")


def store_named(name: str, value) -> None:
    path = _named_path(name)
    if path is None:
        return
    os.makedirs(os.path.dirname(path), exist_ok=True)
    tmp = path + f".tmp{os.getpid()}"
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump({"value": value}, fh)
    os.replace(tmp, path)


def stats() -> dict:
    return {"hits": _state["hits"], "misses": _state["misses"]}
