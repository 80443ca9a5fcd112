"""Service configuration: environment variables plus one TOML/JSON file.

File values override the environment. Nothing here requires network
credentials: with no configuration at all the service runs on the
deterministic local stubs (hash embeddings, echo model, no web search).
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

try:
    import tomllib  # Python 3.11+
except ModuleNotFoundError:  # pragma: no cover
    import tomli as tomllib

from ..deck.ocr import DEFAULT_LANGUAGE_HINTS, ExternalOcrEngine, StubOcrEngine
from ..kb.embeddings import DEFAULT_DIM, HashEmbeddingClient, RemoteEmbeddingClient
from ..retrieval.web import CustomSearchClient, StubWebSearchClient
from ..textbook.llm import EchoLlmClient, HttpChatClient, LlmRouter, ModelEndpoint
from .pipeline import PipelineClients, PipelineSettings

CONFIG_ENV = "SLIDEFORGE_CONFIG"
WORKDIR_ENV = "SLIDEFORGE_WORKDIR"
PORT_ENV = "SLIDEFORGE_PORT"

DEFAULT_MAX_UPLOAD_BYTES = 50 * 1024 * 1024


@dataclass
class UploadPolicy:
    max_bytes: int = DEFAULT_MAX_UPLOAD_BYTES
    allowed_extensions: tuple[str, ...] = (".pptx", ".ppt")
    require_zip_magic: bool = True


@dataclass
class AppConfig:
    workdir: Path = Path("slideforge-work")
    port: int = 8000
    upload: UploadPolicy = field(default_factory=UploadPolicy)
    ppt_converter: str = ""  # external .ppt -> .pptx converter command; empty = reject .ppt
    static_dir: Path | None = None
    kb_path: Path | None = None

    ocr_kind: str = "auto"  # auto | external | stub | none
    ocr_cmd: str = ""
    ocr_stub_map: dict[str, str] = field(default_factory=dict)
    language_hints: list[str] = field(default_factory=lambda: list(DEFAULT_LANGUAGE_HINTS))

    embed_kind: str = "auto"  # auto | remote | hash
    embed_url: str = ""
    embed_model: str = ""
    embed_key: str = ""
    embed_dim: int = DEFAULT_DIM

    search_kind: str = "auto"  # auto | custom | stub | none
    search_key: str = ""
    search_cx: str = ""
    search_stub_results: list[dict] = field(default_factory=list)

    retrieval: PipelineSettings = field(default_factory=PipelineSettings)
    job_workers: int = 2
    cache_ttl_seconds: float = 3600.0
    models: dict[str, ModelEndpoint] = field(default_factory=dict)


def load_config(path: str | Path | None = None, env: dict | None = None) -> AppConfig:
    env = dict(os.environ if env is None else env)
    config = AppConfig()

    config.workdir = Path(env.get(WORKDIR_ENV, str(config.workdir)))
    if env.get(PORT_ENV):
        config.port = int(env[PORT_ENV])
    config.ocr_cmd = env.get("SLIDEFORGE_OCR_CMD", "")
    config.embed_url = env.get("SLIDEFORGE_EMBED_URL", "")
    config.embed_model = env.get("SLIDEFORGE_EMBED_MODEL", "")
    config.embed_key = env.get("SLIDEFORGE_EMBED_KEY", "")
    config.search_key = env.get("SLIDEFORGE_SEARCH_KEY", "")
    config.search_cx = env.get("SLIDEFORGE_SEARCH_CX", "")

    file_path = path or env.get(CONFIG_ENV)
    if file_path:
        _apply_file(config, Path(file_path))
    return config


def _read_config_file(path: Path) -> dict:
    data = path.read_bytes()
    if path.suffix.lower() == ".json":
        return json.loads(data.decode("utf-8"))
    return tomllib.loads(data.decode("utf-8"))


def _apply_file(config: AppConfig, path: Path) -> None:
    doc = _read_config_file(path)

    if "workdir" in doc:
        config.workdir = Path(doc["workdir"])
    if "port" in doc:
        config.port = int(doc["port"])
    if "max_upload_mib" in doc:
        config.upload.max_bytes = int(doc["max_upload_mib"]) * 1024 * 1024
    if "ppt_converter" in doc:
        config.ppt_converter = str(doc["ppt_converter"])
    if "static_dir" in doc:
        config.static_dir = Path(doc["static_dir"])
    if "kb_path" in doc:
        config.kb_path = Path(doc["kb_path"])

    ocr = doc.get("ocr", {})
    config.ocr_kind = ocr.get("kind", config.ocr_kind)
    config.ocr_cmd = ocr.get("cmd", config.ocr_cmd)
    config.ocr_stub_map = dict(ocr.get("stub_map", config.ocr_stub_map))
    if "language_hints" in ocr:
        config.language_hints = list(ocr["language_hints"])

    embed = doc.get("embeddings", {})
    config.embed_kind = embed.get("kind", config.embed_kind)
    config.embed_url = embed.get("url", config.embed_url)
    config.embed_model = embed.get("model", config.embed_model)
    config.embed_key = embed.get("key", config.embed_key)
    config.embed_dim = int(embed.get("dim", config.embed_dim))

    search = doc.get("search", {})
    config.search_kind = search.get("kind", config.search_kind)
    config.search_key = search.get("key", config.search_key)
    config.search_cx = search.get("cx", config.search_cx)
    config.search_stub_results = list(search.get("stub_results", config.search_stub_results))

    retrieval = doc.get("retrieval", {})
    for name in ("w_local", "w_web", "dedup_threshold"):
        if name in retrieval:
            setattr(config.retrieval, name, float(retrieval[name]))
    for name in ("k_local", "n_web"):
        if name in retrieval:
            setattr(config.retrieval, name, int(retrieval[name]))

    workers = doc.get("workers", {})
    if "jobs" in workers:
        config.job_workers = int(workers["jobs"])
    if "chapters" in workers:
        config.retrieval.chapter_workers = int(workers["chapters"])

    cache = doc.get("cache", {})
    if "ttl_seconds" in cache:
        config.cache_ttl_seconds = float(cache["ttl_seconds"])

    for model_id, entry in doc.get("models", {}).items():
        config.models[model_id] = ModelEndpoint(
            url=entry["url"],
            api_key=entry.get("key", ""),
            remote_model=entry.get("remote_model", ""),
        )


def build_clients(config: AppConfig) -> PipelineClients:
    """Instantiate adapters per config; unset services fall back to stubs."""
    if config.ocr_kind == "stub":
        ocr = StubOcrEngine(config.ocr_stub_map)
    elif config.ocr_kind == "none":
        ocr = None
    elif config.ocr_kind == "external" or config.ocr_cmd:
        ocr = ExternalOcrEngine(cmd=config.ocr_cmd or None)
    else:
        ocr = None

    if config.embed_kind == "remote" or (config.embed_kind == "auto" and config.embed_url):
        embed = RemoteEmbeddingClient(config.embed_url, config.embed_model,
                                      config.embed_key, dim=config.embed_dim)
    else:
        embed = HashEmbeddingClient(dim=config.embed_dim)

    if config.search_kind == "stub":
        web = StubWebSearchClient(config.search_stub_results)
    elif config.search_kind == "custom" or (
        config.search_kind == "auto" and config.search_key and config.search_cx
    ):
        web = CustomSearchClient(config.search_key, config.search_cx)
    else:
        web = None

    clients = [EchoLlmClient()]
    if config.models:
        clients.insert(0, HttpChatClient(config.models))
    return PipelineClients(llm=LlmRouter(clients), embed=embed, ocr=ocr, web=web)
