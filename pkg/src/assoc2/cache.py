"""Append-friendly JSON-lines cache for the count recurrences.

One line per entry: {"kind": "K", "m": int, "r": int, "value": "<decimal>"} or
{"kind": "W", "tree": str, "m": int, "n": [ints], "value": "<decimal>"}.
Values are decimal strings so no precision is lost.  Corrupted lines are
skipped with a warning and the entry is simply recomputed.
"""

from __future__ import annotations

import json
import logging
import os

log = logging.getLogger(__name__)

ENV_CACHE_DIR = "ASSOC2_CACHE_DIR"
CACHE_FILENAME = "counts.jsonl"


class CountCache:
    def __init__(self, directory: str):
        self.directory = directory
        self.path = os.path.join(directory, CACHE_FILENAME)
        self._k: dict[tuple[int, int], int] = {}
        self._w: dict[tuple[str, int, tuple[int, ...]], int] = {}
        self._load()

    def _load(self) -> None:
        if not os.path.exists(self.path):
            return
        with open(self.path, "r", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    row = json.loads(line)
                    if row["kind"] == "K":
                        self._k[(int(row["m"]), int(row["r"]))] = int(row["value"])
                    elif row["kind"] == "W":
                        key = (row["tree"], int(row["m"]), tuple(int(v) for v in row["n"]))
                        self._w[key] = int(row["value"])
                    else:
                        raise ValueError(f"unknown kind {row['kind']!r}")
                except (ValueError, KeyError, TypeError) as exc:
                    log.warning("ignoring corrupted cache line %d in %s: %s",
                                lineno, self.path, exc)

    def _append(self, row: dict) -> None:
        os.makedirs(self.directory, exist_ok=True)
        with open(self.path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(row, sort_keys=True, separators=(",", ":")) + "\n")

    def get_K(self, m: int, r: int) -> int | None:
        return self._k.get((m, r))

    def put_K(self, m: int, r: int, value: int) -> None:
        if (m, r) in self._k:
            return
        self._k[(m, r)] = value
        self._append({"kind": "K", "m": m, "r": r, "value": str(value)})

    def get_W(self, tree: str, m: int, n: tuple[int, ...]) -> int | None:
        return self._w.get((tree, m, n))

    def put_W(self, tree: str, m: int, n: tuple[int, ...], value: int) -> None:
        key = (tree, m, n)
        if key in self._w:
            return
        self._w[key] = value
        self._append({"kind": "W", "tree": tree, "m": m, "n": list(n), "value": str(value)})


def cache_from_env(cli_dir: str | None = None) -> CountCache | None:
    """Cache directory from --cache-dir, else the environment, else disabled."""
    directory = cli_dir or os.environ.get(ENV_CACHE_DIR)
    if not directory:
        return None
    return CountCache(directory)
