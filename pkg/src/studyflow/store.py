"""Plain-file persistence for runs and their inputs.

Layout under one archive root:

    inputs/<sha256>.csv              uploaded CSVs, content-addressed
    runs/<run_id>/manifest.json      RunDescriptor
    runs/<run_id>/<dataset>.<fmt>    the four datasets, both formats

No database; a run directory is a self-contained reproducibility artifact.
The store reloads manifests on construction, so a restarted service keeps
serving finished runs without recomputation.
"""

from __future__ import annotations

import hashlib
import json
import threading
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Mapping, Optional

from .analytics import DATASET_NAMES

STATUSES = ("pending", "running", "done", "failed")
FORMATS = ("csv", "json")


class UnknownInput(KeyError):
    pass


class UnknownRun(KeyError):
    pass


def content_digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def _utc_now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


@dataclass
class RunDescriptor:
    run_id: str
    params: dict  # flat parameter schema
    inputs: dict  # {"students": digest, "curriculum": digest}
    status: str = "pending"
    created_at: str = field(default_factory=_utc_now)
    datasets: dict = field(default_factory=dict)  # name -> {fmt: filename}
    digests: dict = field(default_factory=dict)  # name -> {fmt: sha256}
    error: Optional[str] = None

    def to_dict(self) -> dict:
        return {
            "run_id": self.run_id,
            "params": self.params,
            "inputs": self.inputs,
            "status": self.status,
            "created_at": self.created_at,
            "datasets": self.datasets,
            "digests": self.digests,
            "error": self.error,
        }

    @classmethod
    def from_dict(cls, raw: Mapping) -> "RunDescriptor":
        return cls(
            run_id=raw["run_id"],
            params=dict(raw["params"]),
            inputs=dict(raw["inputs"]),
            status=raw["status"],
            created_at=raw["created_at"],
            datasets={k: dict(v) for k, v in raw.get("datasets", {}).items()},
            digests={k: dict(v) for k, v in raw.get("digests", {}).items()},
            error=raw.get("error"),
        )


def write_dataset_files(directory: Path, exports: Mapping) -> tuple[dict, dict]:
    """Write name.csv / name.json files; returns (filenames, digests)."""
    directory.mkdir(parents=True, exist_ok=True)
    filenames: dict = {}
    digests: dict = {}
    for name, blobs in exports.items():
        filenames[name] = {}
        digests[name] = {}
        for fmt in sorted(blobs):
            data = blobs[fmt]
            filename = f"{name}.{fmt}"
            (directory / filename).write_bytes(data)
            filenames[name][fmt] = filename
            digests[name][fmt] = content_digest(data)
    return filenames, digests


class RunStore:
    """Archive of inputs and runs; mutation is serialized by one lock."""

    def __init__(self, root) -> None:
        self.root = Path(root)
        self.inputs_dir = self.root / "inputs"
        self.runs_dir = self.root / "runs"
        self.inputs_dir.mkdir(parents=True, exist_ok=True)
        self.runs_dir.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        self._runs: dict[str, RunDescriptor] = {}
        self._load_existing()

    def _load_existing(self) -> None:
        for manifest in sorted(self.runs_dir.glob("*/manifest.json")):
            try:
                raw = json.loads(manifest.read_text(encoding="utf-8"))
                desc = RunDescriptor.from_dict(raw)
            except (ValueError, KeyError):
                continue  # a torn write from a crash; skip, don't crash the store
            self._runs[desc.run_id] = desc

    # -- inputs --------------------------------------------------------------

    def put_input(self, data: bytes) -> str:
        digest = content_digest(data)
        path = self.inputs_dir / f"{digest}.csv"
        if not path.exists():
            path.write_bytes(data)
        return digest

    def has_input(self, digest: str) -> bool:
        return (self.inputs_dir / f"{digest}.csv").exists()

    def get_input(self, digest: str) -> bytes:
        path = self.inputs_dir / f"{digest}.csv"
        if not path.exists():
            raise UnknownInput(digest)
        return path.read_bytes()

    # -- runs ------------------------------------------------------------------

    def run_dir(self, run_id: str) -> Path:
        return self.runs_dir / run_id

    def _persist(self, desc: RunDescriptor) -> None:
        directory = self.run_dir(desc.run_id)
        directory.mkdir(parents=True, exist_ok=True)
        payload = json.dumps(desc.to_dict(), indent=2, sort_keys=True)
        (directory / "manifest.json").write_text(payload, encoding="utf-8")

    def create_run(self, params_flat: Mapping, input_digests: Mapping) -> RunDescriptor:
        desc = RunDescriptor(
            run_id=uuid.uuid4().hex,
            params=dict(params_flat),
            inputs=dict(input_digests),
        )
        with self._lock:
            self._runs[desc.run_id] = desc
            self._persist(desc)
        return desc

    def mark_running(self, run_id: str) -> None:
        with self._lock:
            desc = self._require(run_id)
            desc.status = "running"
            self._persist(desc)

    def finish_run(self, run_id: str, exports: Mapping) -> RunDescriptor:
        with self._lock:
            desc = self._require(run_id)
            filenames, digests = write_dataset_files(self.run_dir(run_id), exports)
            desc.datasets = filenames
            desc.digests = digests
            desc.status = "done"
            desc.error = None
            self._persist(desc)
            return desc

    def fail_run(self, run_id: str, message: str) -> None:
        with self._lock:
            desc = self._require(run_id)
            desc.status = "failed"
            desc.error = message
            self._persist(desc)

    def get_run(self, run_id: str) -> Optional[RunDescriptor]:
        with self._lock:
            return self._runs.get(run_id)

    def _require(self, run_id: str) -> RunDescriptor:
        desc = self._runs.get(run_id)
        if desc is None:
            raise UnknownRun(run_id)
        return desc

    def dataset_bytes(self, run_id: str, name: str, fmt: str) -> bytes:
        desc = self.get_run(run_id)
        if desc is None:
            raise UnknownRun(run_id)
        if name not in DATASET_NAMES or fmt not in FORMATS:
            raise KeyError(f"no dataset {name!r} in format {fmt!r}")
        filename = desc.datasets.get(name, {}).get(fmt, f"{name}.{fmt}")
        path = self.run_dir(run_id) / filename
        if not path.exists():
            raise KeyError(f"dataset file missing for run {run_id}: {filename}")
        return path.read_bytes()
