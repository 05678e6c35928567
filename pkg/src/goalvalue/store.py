"""Versioned, append-only persistence of prioritizations and analysis results.

Each model gets its own directory of canonical-JSON snapshot files
(v0001.json, v0002.json, ...) plus an index.json with version metadata.
Snapshots are immutable once written.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path

from .analysis import AnalysisResult
from .canonical import canonical_dumps, prioritization_to_json
from .model import Prioritization


class SnapshotNotFoundError(KeyError):
    pass


@dataclass(frozen=True)
class HistoryEntry:
    version: int
    created_at: str
    summary: dict

    def to_json(self) -> dict:
        return {
            "version": self.version,
            "createdAt": self.created_at,
            "summary": self.summary,
        }


@dataclass(frozen=True)
class DiffEntry:
    importance_before: str
    importance_after: str
    confidence_before: str
    confidence_after: str
    global_before: float
    global_after: float
    delta: float
    rank_before: int
    rank_after: int

    def to_json(self) -> dict:
        return {
            "importanceBefore": self.importance_before,
            "importanceAfter": self.importance_after,
            "confidenceBefore": self.confidence_before,
            "confidenceAfter": self.confidence_after,
            "globalValueBefore": self.global_before,
            "globalValueAfter": self.global_after,
            "delta": self.delta,
            "rankBefore": self.rank_before,
            "rankAfter": self.rank_after,
        }


@dataclass(frozen=True)
class VersionDiff:
    from_version: int
    to_version: int
    entries: dict[str, DiffEntry]
    added: tuple[str, ...]
    removed: tuple[str, ...]

    def to_json(self) -> dict:
        return {
            "fromVersion": self.from_version,
            "toVersion": self.to_version,
            "elements": {eid: e.to_json() for eid, e in sorted(self.entries.items())},
            "added": list(self.added),
            "removed": list(self.removed),
        }


class SessionStore:
    """File-backed snapshot store; one subdirectory per model id."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def _model_dir(self, model_id: str) -> Path:
        return self.root / model_id

    def _index_path(self, model_id: str) -> Path:
        return self._model_dir(model_id) / "index.json"

    def _read_index(self, model_id: str) -> list[dict]:
        path = self._index_path(model_id)
        if not path.exists():
            return []
        return json.loads(path.read_text())["versions"]

    def latest_version(self, model_id: str) -> int:
        index = self._read_index(model_id)
        return index[-1]["version"] if index else 0

    def record(
        self,
        model_id: str,
        prioritization: Prioritization,
        result: AnalysisResult,
    ) -> int:
        """Persist the next snapshot atomically and return its version."""
        directory = self._model_dir(model_id)
        directory.mkdir(parents=True, exist_ok=True)
        index = self._read_index(model_id)
        version = (index[-1]["version"] if index else 0) + 1

        result_json = result.to_json()
        snapshot = {
            "version": version,
            "createdAt": result.created_at,
            "prioritization": prioritization_to_json(prioritization),
            "result": result_json,
            "configEcho": result.config.to_json(),
        }
        top = result_json["globalRanking"][0] if result_json["globalRanking"] else None
        index.append(
            {
                "version": version,
                "createdAt": result.created_at,
                "summary": {
                    "elementCount": len(result_json["globalRanking"]),
                    "topElement": top,
                },
            }
        )

        snapshot_path = directory / f"v{version:04d}.json"
        self._write_atomic(snapshot_path, canonical_dumps(snapshot))
        self._write_atomic(
            self._index_path(model_id), canonical_dumps({"versions": index})
        )
        return version

    @staticmethod
    def _write_atomic(path: Path, text: str) -> None:
        tmp = path.with_suffix(".tmp")
        tmp.write_text(text)
        os.replace(tmp, path)

    def history(self, model_id: str) -> list[HistoryEntry]:
        return [
            HistoryEntry(e["version"], e["createdAt"], e["summary"])
            for e in self._read_index(model_id)
        ]

    def snapshot(self, model_id: str, version: int) -> dict:
        path = self._model_dir(model_id) / f"v{version:04d}.json"
        if not path.exists():
            raise SnapshotNotFoundError(
                f"model {model_id!r} has no version {version}"
            )
        return json.loads(path.read_text())

    def diff(self, model_id: str, v1: int, v2: int) -> VersionDiff:
        """Elementwise comparison of two snapshots; timestamps are ignored."""
        before = self.snapshot(model_id, v1)
        after = self.snapshot(model_id, v2)

        def unpack(snap: dict):
            priorities = snap["prioritization"]["elementPriorities"]
            values = snap["result"]["values"]
            ranking = snap["result"]["globalRanking"]
            ranks = {eid: i + 1 for i, eid in enumerate(ranking)}
            return priorities, values, ranks

        p1, v1_values, r1 = unpack(before)
        p2, v2_values, r2 = unpack(after)
        ids1, ids2 = set(v1_values), set(v2_values)

        entries: dict[str, DiffEntry] = {}
        for eid in sorted(ids1 & ids2):
            g1 = v1_values[eid]["globalValue"]
            g2 = v2_values[eid]["globalValue"]
            entries[eid] = DiffEntry(
                importance_before=p1[eid]["importance"],
                importance_after=p2[eid]["importance"],
                confidence_before=p1[eid]["confidence"],
                confidence_after=p2[eid]["confidence"],
                global_before=g1,
                global_after=g2,
                delta=g2 - g1,
                rank_before=r1[eid],
                rank_after=r2[eid],
            )
        return VersionDiff(
            from_version=before["version"],
            to_version=after["version"],
            entries=entries,
            added=tuple(sorted(ids2 - ids1)),
            removed=tuple(sorted(ids1 - ids2)),
        )
