"""Content-addressed JSON cache for command results.

Each entry lives at ``<dir>/<sha256 of the request>.json``.  The request
descriptor includes the library version, so a version bump is a miss.
Writes go to a temporary file that is renamed into place.
"""
from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
from pathlib import Path

from . import __version__

log = logging.getLogger(__name__)

ENV_VAR = "ZSSEP_CACHE_DIR"


def request_key(command: str, group: str, params: dict, version: str = __version__) -> dict:
    return {"command": command, "group": group, "params": params, "version": version}


def _digest(key: dict) -> str:
    return hashlib.sha256(json.dumps(key, sort_keys=True).encode()).hexdigest()


class ResultCache:
    def __init__(self, directory: str | os.PathLike):
        self.directory = Path(directory)

    def path_for(self, key: dict) -> Path:
        return self.directory / f"{_digest(key)}.json"

    def get(self, key: dict):
        path = self.path_for(key)
        if not path.exists():
            return None
        try:
            entry = json.loads(path.read_text())
            if entry["key"] != key:
                raise ValueError("key mismatch")
            return entry["value"]
        except (ValueError, KeyError, TypeError) as exc:
            log.warning("ignoring corrupt cache entry %s (%s); recomputing", path, exc)
            return None

    def put(self, key: dict, value) -> Path:
        self.directory.mkdir(parents=True, exist_ok=True)
        path = self.path_for(key)
        fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                json.dump({"key": key, "value": value}, fh, sort_keys=True)
            os.replace(tmp, path)
        except BaseException:
            Path(tmp).unlink(missing_ok=True)
            raise
        return path


def cache_from(directory: str | None) -> ResultCache | None:
    directory = directory or os.environ.get(ENV_VAR)
    return ResultCache(directory) if directory else None
