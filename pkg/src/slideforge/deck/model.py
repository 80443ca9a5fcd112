"""Canonical deck model and its JSON serialization."""

from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass
class BodyBlock:
    text: str
    level: int = 0
    bullet: bool = False


@dataclass
class SlideImage:
    """Per-slide image record as it appears in the canonical JSON."""

    id: str
    path: str = ""
    ocr_text: str = ""


@dataclass
class SlideRecord:
    index: int
    title: str | None = None
    body_blocks: list[BodyBlock] = field(default_factory=list)
    notes: str | None = None
    images: list[SlideImage] = field(default_factory=list)
    raw_text: str = ""
    ocr_text: str = ""

    def rebuild_raw_text(self) -> None:
        parts = [] if self.title is None else [self.title]
        parts.extend(block.text for block in self.body_blocks)
        if self.notes is not None:
            parts.append(self.notes)
        self.raw_text = "\n".join(parts)

    def rebuild_ocr_text(self) -> None:
        self.ocr_text = "\n".join(img.ocr_text for img in self.images)


@dataclass
class DeckExtract:
    source_name: str
    slide_count: int
    slides: list[SlideRecord] = field(default_factory=list)


def deck_to_json(deck: DeckExtract) -> str:
    """Serialize to the canonical UTF-8 JSON document.

    Key order is fixed; body_blocks and notes trail the canonical keys so
    the document round-trips without loss.
    """
    doc = {
        "source_name": deck.source_name,
        "slide_count": deck.slide_count,
        "slides": [
            {
                "index": s.index,
                "title": s.title,
                "raw_text": s.raw_text,
                "ocr_text": s.ocr_text,
                "images": [
                    {"id": img.id, "path": img.path, "ocr_text": img.ocr_text}
                    for img in s.images
                ],
                "body_blocks": [
                    {"text": b.text, "level": b.level, "bullet": b.bullet}
                    for b in s.body_blocks
                ],
                "notes": s.notes,
            }
            for s in deck.slides
        ],
    }
    return json.dumps(doc, ensure_ascii=False, indent=2)


def deck_from_json(text: str) -> DeckExtract:
    doc = json.loads(text)
    slides = [
        SlideRecord(
            index=int(s["index"]),
            title=s.get("title"),
            body_blocks=[
                BodyBlock(b["text"], int(b.get("level", 0)), bool(b.get("bullet", False)))
                for b in s.get("body_blocks", [])
            ],
            notes=s.get("notes"),
            images=[
                SlideImage(img["id"], img.get("path", ""), img.get("ocr_text", ""))
                for img in s.get("images", [])
            ],
            raw_text=s.get("raw_text", ""),
            ocr_text=s.get("ocr_text", ""),
        )
        for s in doc["slides"]
    ]
    deck = DeckExtract(
        source_name=doc["source_name"],
        slide_count=int(doc["slide_count"]),
        slides=slides,
    )
    if deck.slide_count != len(deck.slides):
        raise ValueError(
            f"slide_count {deck.slide_count} does not match {len(deck.slides)} slides"
        )
    if [s.index for s in deck.slides] != list(range(len(deck.slides))):
        raise ValueError("slide indices must be the contiguous sequence 0..n-1")
    return deck
