from .app import create_app, validate_upload
from .cache import CacheEntry, TtlCache
from .cleanup import cleanup_tick
from .config import AppConfig, UploadPolicy, build_clients, load_config
from .jobs import Job, JobStore, STATES, TERMINAL_STATES
from .pipeline import PipelineClients, PipelineSettings, generate_textbook, run_pipeline

__all__ = [
    "AppConfig",
    "CacheEntry",
    "Job",
    "JobStore",
    "PipelineClients",
    "PipelineSettings",
    "STATES",
    "TERMINAL_STATES",
    "TtlCache",
    "UploadPolicy",
    "build_clients",
    "cleanup_tick",
    "create_app",
    "generate_textbook",
    "load_config",
    "run_pipeline",
    "validate_upload",
]
