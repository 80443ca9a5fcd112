"""Job records, the state machine, and the in-memory store with journals."""

from __future__ import annotations

import copy
import json
import logging
import threading
import time
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from ..errors import UnknownJob

logger = logging.getLogger("slideforge.service")

STATES = ("queued", "extracting", "planning", "generating", "assembling", "done", "failed")
TERMINAL_STATES = frozenset({"done", "failed"})

# forward edges only; failed is reachable from any non-terminal state
_NEXT: dict[str, frozenset[str]] = {
    "queued": frozenset({"extracting"}),
    "extracting": frozenset({"planning"}),
    "planning": frozenset({"generating"}),
    "generating": frozenset({"assembling"}),
    "assembling": frozenset({"done"}),
    "done": frozenset(),
    "failed": frozenset(),
}

JOURNAL_NAME = "job.json"


@dataclass
class Job:
    id: str
    state: str = "queued"
    progress: int = 0
    chapter_progress: tuple[int, int] = (0, 0)
    created_at: float = 0.0
    updated_at: float = 0.0
    error: str | None = None
    artifact_paths: dict[str, str] = field(default_factory=dict)
    transitions: list[tuple[str, int]] = field(default_factory=list)  # (state, progress) log

    def to_api(self) -> dict:
        def iso(stamp: float) -> str:
            return datetime.fromtimestamp(stamp, tz=timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")

        return {
            "id": self.id,
            "state": self.state,
            "progress": self.progress,
            "chapter_progress": list(self.chapter_progress),
            "created_at": iso(self.created_at),
            "updated_at": iso(self.updated_at),
            "error": self.error,
            "artifact_paths": dict(self.artifact_paths),
        }


class JobStore:
    """Serialized access to job records; snapshots are defensive copies.

    Every mutation rewrites the per-job JSON journal so a restarted
    server can list prior jobs (they are never resumed).
    """

    def __init__(self, workdir: str | Path, clock=time.time):
        self.workdir = Path(workdir)
        self.clock = clock
        self._jobs: dict[str, Job] = {}
        self._lock = threading.Lock()

    # --- lifecycle ---

    def create(self) -> Job:
        now = self.clock()
        job = Job(id=str(uuid.uuid4()), created_at=now, updated_at=now,
                  transitions=[("queued", 0)])
        with self._lock:
            self._jobs[job.id] = job
            self._write_journal(job)
            return copy.deepcopy(job)

    def get(self, job_id: str) -> Job:
        with self._lock:
            job = self._jobs.get(job_id)
            if job is None:
                raise UnknownJob(job_id)
            return copy.deepcopy(job)

    def ids(self) -> list[str]:
        with self._lock:
            return list(self._jobs)

    def remove(self, job_id: str) -> None:
        with self._lock:
            if job_id not in self._jobs:
                raise UnknownJob(job_id)
            del self._jobs[job_id]

    def job_dir(self, job_id: str) -> Path:
        return self.workdir / job_id

    # --- mutation ---

    def transition(self, job_id: str, state: str) -> Job:
        with self._lock:
            job = self._require(job_id)
            if state == "failed":
                if job.state in TERMINAL_STATES:
                    raise ValueError(f"job {job_id} already terminal ({job.state})")
            elif state not in _NEXT[job.state]:
                raise ValueError(f"illegal transition {job.state} -> {state}")
            job.state = state
            if state == "done":
                job.progress = 100
            job.updated_at = self.clock()
            job.transitions.append((state, job.progress))
            self._write_journal(job)
            return copy.deepcopy(job)

    def set_progress(self, job_id: str, progress: int,
                     chapter_progress: tuple[int, int] | None = None) -> None:
        with self._lock:
            job = self._require(job_id)
            job.progress = max(job.progress, min(100, progress))  # monotone per job
            if chapter_progress is not None:
                job.chapter_progress = chapter_progress
            job.updated_at = self.clock()
            job.transitions.append((job.state, job.progress))
            self._write_journal(job)

    def set_error(self, job_id: str, message: str) -> None:
        with self._lock:
            job = self._require(job_id)
            job.error = message
            job.updated_at = self.clock()
            self._write_journal(job)

    def add_artifact(self, job_id: str, name: str, relative_path: str) -> None:
        with self._lock:
            job = self._require(job_id)
            job.artifact_paths[name] = relative_path
            job.updated_at = self.clock()
            self._write_journal(job)

    def _require(self, job_id: str) -> Job:
        job = self._jobs.get(job_id)
        if job is None:
            raise UnknownJob(job_id)
        return job

    # --- journal ---

    def _write_journal(self, job: Job) -> None:
        directory = self.job_dir(job.id)
        try:
            directory.mkdir(parents=True, exist_ok=True)
            payload = job.to_api()
            payload["transitions"] = [list(t) for t in job.transitions]
            payload["created_at_epoch"] = job.created_at
            payload["updated_at_epoch"] = job.updated_at
            tmp = directory / (JOURNAL_NAME + ".tmp")
            tmp.write_text(json.dumps(payload, ensure_ascii=False, indent=2), encoding="utf-8")
            tmp.replace(directory / JOURNAL_NAME)
        except OSError as exc:
            logger.warning("could not journal job %s: %s", job.id, exc)

    def scan_existing(self) -> int:
        """Load prior jobs from journals; interrupted ones become failed."""
        count = 0
        if not self.workdir.exists():
            return 0
        for journal in sorted(self.workdir.glob(f"*/{JOURNAL_NAME}")):
            try:
                doc = json.loads(journal.read_text(encoding="utf-8"))
                job = Job(
                    id=doc["id"],
                    state=doc["state"],
                    progress=int(doc["progress"]),
                    chapter_progress=tuple(doc.get("chapter_progress", (0, 0))),
                    created_at=float(doc.get("created_at_epoch", 0.0)),
                    updated_at=float(doc.get("updated_at_epoch", 0.0)),
                    error=doc.get("error"),
                    artifact_paths=dict(doc.get("artifact_paths", {})),
                    transitions=[tuple(t) for t in doc.get("transitions", [])],
                )
            except (OSError, ValueError, KeyError) as exc:
                logger.warning("skipping unreadable journal %s: %s", journal, exc)
                continue
            if job.state not in TERMINAL_STATES:
                job.state = "failed"
                job.error = job.error or "interrupted by server restart"
                job.updated_at = self.clock()
            with self._lock:
                if job.id not in self._jobs:
                    self._jobs[job.id] = job
                    count += 1
        return count
