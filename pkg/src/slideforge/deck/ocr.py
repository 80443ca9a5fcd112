"""OCR engines and the pass that ties recognized text back to slides."""

from __future__ import annotations

import hashlib
import logging
import os
import shlex
import subprocess
import tempfile
from pathlib import Path
from typing import Sequence

from ..errors import EngineUnavailable, OcrFailure
from .extract import ImageAsset
from .model import DeckExtract

logger = logging.getLogger("slideforge.deck")

OCR_CMD_ENV = "SLIDEFORGE_OCR_CMD"

DEFAULT_LANGUAGE_HINTS = ["eng"]


class OcrEngine:
    """Interface: recognize(image bytes, language hints) -> text.

    Implementations must be deterministic for identical bytes and hints.
    """

    def recognize(self, image_bytes: bytes, language_hints: Sequence[str]) -> str:
        raise NotImplementedError


class StubOcrEngine(OcrEngine):
    """Scripted engine: fixed map from content hash (sha256 hex) to text."""

    def __init__(self, texts_by_hash: dict[str, str] | None = None):
        self.texts_by_hash = dict(texts_by_hash or {})

    def recognize(self, image_bytes: bytes, language_hints: Sequence[str]) -> str:
        return self.texts_by_hash.get(hashlib.sha256(image_bytes).hexdigest(), "")


class ExternalOcrEngine(OcrEngine):
    """Runs an installed OCR binary: <cmd> <image-path> -l <hint>+<hint>.

    stdout is the recognized text. Image preprocessing is the binary's
    job; only language hints cross this boundary.
    """

    def __init__(self, cmd: str | None = None, timeout: float = 60.0):
        self.cmd = cmd if cmd is not None else os.environ.get(OCR_CMD_ENV, "")
        self.timeout = timeout

    def recognize(self, image_bytes: bytes, language_hints: Sequence[str]) -> str:
        if not self.cmd:
            raise EngineUnavailable(f"no OCR command configured ({OCR_CMD_ENV})")
        argv = shlex.split(self.cmd)
        with tempfile.NamedTemporaryFile(suffix=".png", delete=False) as tmp:
            tmp.write(image_bytes)
            tmp_path = tmp.name
        try:
            full = argv + [tmp_path]
            if language_hints:
                full += ["-l", "+".join(language_hints)]
            proc = subprocess.run(full, capture_output=True, timeout=self.timeout, check=False)
        except FileNotFoundError as exc:
            raise EngineUnavailable(f"OCR binary not installed: {argv[0]}") from exc
        except subprocess.TimeoutExpired as exc:
            raise OcrFailure(f"OCR timed out after {self.timeout}s") from exc
        finally:
            try:
                os.unlink(tmp_path)
            except OSError:
                pass
        if proc.returncode != 0:
            raise OcrFailure(
                f"OCR exited {proc.returncode}: {proc.stderr.decode(errors='replace')[:200]}"
            )
        return proc.stdout.decode("utf-8", errors="replace").strip()


def ocr_deck(
    deck: DeckExtract,
    assets: list[ImageAsset],
    engine: OcrEngine,
    language_hints: Sequence[str] | None = None,
) -> DeckExtract:
    """Fill asset OCR text and rebuild per-slide ocr_text.

    Individual image failures degrade to empty text with a warning; a
    missing engine (EngineUnavailable) fails the whole pass since that is
    a configuration error.
    """
    hints = list(language_hints) if language_hints is not None else list(DEFAULT_LANGUAGE_HINTS)
    by_slide: dict[int, dict[str, str]] = {}
    for asset in assets:
        try:
            data = Path(asset.exported_path).read_bytes()
            text = engine.recognize(data, hints)
        except EngineUnavailable:
            raise
        except (OcrFailure, OSError) as exc:
            logger.warning("OCR failed for %s: %s", asset.id, exc)
            text = ""
        asset.ocr_text = text
        by_slide.setdefault(asset.slide_index, {})[asset.id] = text

    for record in deck.slides:
        updates = by_slide.get(record.index, {})
        for img in record.images:
            if img.id in updates:
                img.ocr_text = updates[img.id]
        record.rebuild_ocr_text()
    return deck
