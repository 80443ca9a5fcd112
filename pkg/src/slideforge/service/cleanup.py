"""Periodic removal of expired terminal job workdirs."""

from __future__ import annotations

import logging
import shutil

from .jobs import TERMINAL_STATES, JobStore

logger = logging.getLogger("slideforge.service")

DEFAULT_MAX_AGE_SECONDS = 24 * 3600.0


def cleanup_tick(store: JobStore, now: float,
                 max_age_seconds: float = DEFAULT_MAX_AGE_SECONDS) -> int:
    """Delete workdirs of terminal jobs idle for longer than max_age.

    Live (non-terminal) jobs are never touched. IO failures are logged
    and skipped. Returns the number of jobs cleaned.
    """
    deleted = 0
    for job_id in store.ids():
        try:
            job = store.get(job_id)
        except Exception:
            continue
        if job.state not in TERMINAL_STATES:
            continue
        if now - job.updated_at <= max_age_seconds:
            continue
        directory = store.job_dir(job_id)
        try:
            if directory.exists():
                shutil.rmtree(directory)
            store.remove(job_id)
            deleted += 1
        except OSError as exc:
            logger.warning("cleanup skipped %s: %s", job_id, exc)
    return deleted
