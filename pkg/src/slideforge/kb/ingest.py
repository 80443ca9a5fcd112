"""Source document ingestion: plain text, Markdown, or PDF via an external extractor."""

from __future__ import annotations

import hashlib
import logging
import os
import shlex
import subprocess
import tempfile
import unicodedata
from dataclasses import dataclass

from ..errors import EmptyDocument, ExtractorUnavailable

logger = logging.getLogger("slideforge.kb")

PDF_CMD_ENV = "SLIDEFORGE_PDF_CMD"

KINDS = ("plain-text", "markdown", "pdf-via-extractor")


@dataclass
class SourceDoc:
    id: str
    title: str
    origin: str
    full_text: str


def ingest_document(
    source: bytes | str,
    kind: str = "plain-text",
    title: str = "",
    origin: str = "",
    extractor_cmd: str | None = None,
) -> SourceDoc:
    """Produce a SourceDoc with NFC-normalized, LF-only full_text.

    Markdown is stored verbatim (it is the canonical stored form); PDFs
    go through the external extractor command (stdout = extracted text),
    configurable via SLIDEFORGE_PDF_CMD.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown document kind {kind!r}")
    if kind == "pdf-via-extractor":
        if isinstance(source, str):
            source = source.encode("utf-8")
        text = _run_extractor(source, extractor_cmd)
    else:
        text = source.decode("utf-8", errors="replace") if isinstance(source, bytes) else source
    text = unicodedata.normalize("NFC", text).replace("\r\n", "\n").replace("\r", "\n")
    if not text.strip():
        raise EmptyDocument(origin or title or "<unnamed>")
    digest = hashlib.sha256((origin + "\0" + text).encode("utf-8")).hexdigest()[:16]
    return SourceDoc(id=digest, title=title, origin=origin, full_text=text)


def _run_extractor(data: bytes, extractor_cmd: str | None) -> str:
    cmd = extractor_cmd or os.environ.get(PDF_CMD_ENV, "")
    if not cmd:
        raise ExtractorUnavailable(f"no PDF extractor configured ({PDF_CMD_ENV})")
    argv = shlex.split(cmd)
    with tempfile.NamedTemporaryFile(suffix=".pdf", delete=False) as tmp:
        tmp.write(data)
        tmp_path = tmp.name
    try:
        proc = subprocess.run(
            argv + [tmp_path], capture_output=True, timeout=120, check=False
        )
    except FileNotFoundError as exc:
        raise ExtractorUnavailable(f"PDF extractor not installed: {argv[0]}") from exc
    finally:
        try:
            os.unlink(tmp_path)
        except OSError:
            pass
    if proc.returncode != 0:
        raise ExtractorUnavailable(
            f"PDF extractor exited {proc.returncode}: {proc.stderr.decode(errors='replace')[:200]}"
        )
    return proc.stdout.decode("utf-8", errors="replace")
