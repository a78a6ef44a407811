"""Append-only JSON-lines store of central values keyed by ``(family, a, b)``."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional

ENGINE_VERSION = "1"

__all__ = ["ENGINE_VERSION", "CacheEntry", "LValueCache", "cache_load", "cache_store"]


@dataclass(frozen=True)
class CacheEntry:
    family: str
    a: int
    b: int
    L_re: float
    L_im: float
    L_err: float
    balance: float
    truncation: int
    engine_version: str = ENGINE_VERSION

    @property
    def key(self) -> tuple[str, int, int]:
        return (self.family, self.a, self.b)

    def to_line(self) -> str:
        return json.dumps(
            {
                "family": self.family,
                "a": self.a,
                "b": self.b,
                "L_re": self.L_re,
                "L_im": self.L_im,
                "L_err": self.L_err,
                "balance": self.balance,
                "truncation": self.truncation,
                "engine_version": self.engine_version,
            },
            sort_keys=True,
        )

    @classmethod
    def from_line(cls, line: str) -> CacheEntry:
        d = json.loads(line)
        return cls(
            str(d["family"]),
            int(d["a"]),
            int(d["b"]),
            float(d["L_re"]),
            float(d["L_im"]),
            float(d.get("L_err", 0.0)),
            float(d["balance"]),
            int(d["truncation"]),
            str(d["engine_version"]),
        )


class LValueCache:
    """In-memory map backed by an append-only file.  A single process writes."""

    def __init__(self, path: Optional[str | os.PathLike] = None):
        self.path = Path(path) if path is not None else None
        self.entries: dict[tuple[str, int, int], CacheEntry] = {}
        self.warnings = 0
        self.stale = 0
        if self.path is not None and self.path.exists():
            self._load()

    def _load(self) -> None:
        with open(self.path, encoding="utf-8") as fh:
            for line in fh:
                if not line.strip():
                    continue
                try:
                    e = CacheEntry.from_line(line)
                except (ValueError, KeyError, TypeError):
                    self.warnings += 1
                    continue
                if e.engine_version != ENGINE_VERSION:
                    self.stale += 1
                    continue
                self.entries[e.key] = e

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, key) -> bool:
        return key in self.entries

    def get(self, family: str, a: int, b: int) -> Optional[CacheEntry]:
        return self.entries.get((family, a, b))

    def put_many(self, entries: Iterable[CacheEntry]) -> int:
        """Record new entries, appending them to the backing file; returns how many were new."""
        fresh = [e for e in entries if e.key not in self.entries]
        for e in fresh:
            self.entries[e.key] = e
        if fresh and self.path is not None:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            if self.path.exists() and self.path.stat().st_size:
                with open(self.path, "rb") as fh:
                    fh.seek(-1, os.SEEK_END)
                    needs_newline = fh.read(1) != b"\n"
            else:
                needs_newline = False
            with open(self.path, "a", encoding="utf-8") as fh:
                if needs_newline:
                    # never glue a record onto a truncated line
                    fh.write("\n")
                for e in fresh:
                    fh.write(e.to_line() + "\n")
        return len(fresh)

    def put(self, entry: CacheEntry) -> bool:
        return self.put_many([entry]) == 1


def cache_load(path: str | os.PathLike) -> LValueCache:
    return LValueCache(path)


def cache_store(path: str | os.PathLike, entries: Iterable[CacheEntry]) -> LValueCache:
    cache = LValueCache(path)
    cache.put_many(entries)
    return cache
