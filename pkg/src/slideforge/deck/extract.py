"""Slide text/structure extraction and image export."""

from __future__ import annotations

import hashlib
import logging
import posixpath
from dataclasses import dataclass
from pathlib import Path
from xml.etree import ElementTree

from .container import NS, R_EMBED, DeckArchive, parse_relationships
from .model import BodyBlock, DeckExtract, SlideImage, SlideRecord

logger = logging.getLogger("slideforge.deck")

TITLE_PH_TYPES = {"title", "ctrTitle"}
_NO_OFFSET = (2 ** 62, 2 ** 62)

_P = f"{{{NS['p']}}}"
_A = f"{{{NS['a']}}}"


@dataclass
class ImageAsset:
    id: str
    slide_index: int
    media_path: str
    content_hash: str
    exported_path: str = ""
    ocr_text: str = ""


def extract_slides(archive: DeckArchive) -> list[SlideRecord]:
    """One SlideRecord per slide part, in presentation order.

    Unparseable slide XML yields an empty record plus a warning instead
    of aborting the extraction.
    """
    records = []
    for index, path in enumerate(archive.slide_paths):
        record = SlideRecord(index=index)
        try:
            root = ElementTree.fromstring(archive.entries[path])
        except ElementTree.ParseError as exc:
            logger.warning("%s: slide %d (%s) has unparseable XML: %s",
                           archive.source_name, index, path, exc)
            record.rebuild_raw_text()
            records.append(record)
            continue

        title_el, body_shapes = _partition_shapes(root)
        if title_el is not None:
            title = _shape_text(title_el)
            record.title = title if title else None
        for shape in body_shapes:
            record.body_blocks.extend(_shape_blocks(shape))
        record.notes = _extract_notes(archive, path)
        record.images = [
            SlideImage(id=asset_id)
            for asset_id, _media in _resolved_pictures(archive, path, index)
        ]
        record.rebuild_raw_text()
        records.append(record)
    return records


def extract_images(archive: DeckArchive, slide_index: int, export_dir: str | Path) -> list[ImageAsset]:
    """Export the slide's picture media to export_dir, deduplicated by content hash."""
    if not 0 <= slide_index < len(archive.slide_paths):
        raise IndexError(f"slide index {slide_index} out of range")
    export_dir = Path(export_dir)
    export_dir.mkdir(parents=True, exist_ok=True)
    assets = []
    slide_path = archive.slide_paths[slide_index]
    for asset_id, media_path in _resolved_pictures(archive, slide_path, slide_index):
        data = archive.entries[media_path]
        digest = hashlib.sha256(data).hexdigest()
        ext = posixpath.splitext(media_path)[1] or ".bin"
        target = export_dir / f"{digest}{ext}"
        if not target.exists():
            target.write_bytes(data)
        assets.append(ImageAsset(
            id=asset_id,
            slide_index=slide_index,
            media_path=media_path,
            content_hash=digest,
            exported_path=str(target),
        ))
    return assets


def extract_deck(data: bytes, source_name: str, workdir: str | Path) -> tuple[DeckExtract, list[ImageAsset]]:
    """Full extraction: open, read slides, export media under <workdir>/media/.

    Slide image paths in the deck are stored relative to workdir so the
    canonical JSON does not depend on where the job ran.
    """
    from .container import open_deck

    archive = open_deck(data, source_name)
    slides = extract_slides(archive)
    workdir = Path(workdir)
    media_dir = workdir / "media"
    assets: list[ImageAsset] = []
    for record in slides:
        slide_assets = extract_images(archive, record.index, media_dir)
        by_id = {a.id: a for a in slide_assets}
        for img in record.images:
            asset = by_id.get(img.id)
            if asset is not None:
                img.path = posixpath.join("media", Path(asset.exported_path).name)
        assets.extend(slide_assets)
    return DeckExtract(source_name=source_name, slide_count=len(slides), slides=slides), assets


# --- shape walking ---

def _partition_shapes(root: ElementTree.Element):
    """Return (title shape, remaining shapes sorted by (top, left))."""
    tree = root.find(f"{_P}cSld/{_P}spTree")
    if tree is None:
        return None, []
    title_el = None
    rest = []
    for position, el in enumerate(tree):
        if el.tag not in (f"{_P}sp", f"{_P}graphicFrame", f"{_P}grpSp"):
            continue
        if el.tag == f"{_P}sp" and title_el is None and _ph_type(el) in TITLE_PH_TYPES:
            title_el = el
            continue
        rest.append((_offset(el), position, el))
    rest.sort(key=lambda item: (item[0], item[1]))
    return title_el, [el for _, _, el in rest]


def _ph_type(sp: ElementTree.Element) -> str | None:
    ph = sp.find(f"{_P}nvSpPr/{_P}nvPr/{_P}ph")
    return None if ph is None else ph.get("type", "body")


def _offset(el: ElementTree.Element) -> tuple[int, int]:
    # shapes inherit layout geometry when xfrm is absent; those sort last
    off = el.find(f".//{_A}off")
    if off is None:
        return _NO_OFFSET
    try:
        return int(off.get("y", "0")), int(off.get("x", "0"))
    except ValueError:
        return _NO_OFFSET


def _paragraph_text(para: ElementTree.Element) -> str:
    parts = []
    for child in para:
        if child.tag in (f"{_A}r", f"{_A}fld"):
            t = child.find(f"{_A}t")
            if t is not None and t.text:
                parts.append(t.text)
        elif child.tag == f"{_A}br":
            parts.append("\n")
    return "".join(parts)


def _paragraph_block(para: ElementTree.Element) -> BodyBlock | None:
    text = _paragraph_text(para)
    if not text.strip():
        return None
    ppr = para.find(f"{_A}pPr")
    level = 0
    bullet = False
    if ppr is not None:
        try:
            level = max(0, int(ppr.get("lvl", "0")))
        except ValueError:
            level = 0
        bullet = ppr.find(f"{_A}buChar") is not None or ppr.find(f"{_A}buAutoNum") is not None
    return BodyBlock(text=text, level=level, bullet=bullet)


def _shape_text(sp: ElementTree.Element) -> str:
    paras = [_paragraph_text(p) for p in sp.findall(f"{_P}txBody/{_A}p")]
    return "\n".join(p for p in paras if p.strip())


def _shape_blocks(el: ElementTree.Element) -> list[BodyBlock]:
    blocks: list[BodyBlock] = []
    if el.tag == f"{_P}sp":
        for para in el.findall(f"{_P}txBody/{_A}p"):
            block = _paragraph_block(para)
            if block is not None:
                blocks.append(block)
    elif el.tag == f"{_P}graphicFrame":
        # table cells flatten row-major, one block per non-empty cell
        for cell in el.findall(f".//{_A}tbl/{_A}tr/{_A}tc"):
            paras = [_paragraph_text(p) for p in cell.findall(f"{_A}txBody/{_A}p")]
            text = "\n".join(p for p in paras if p.strip())
            if text.strip():
                blocks.append(BodyBlock(text=text))
    elif el.tag == f"{_P}grpSp":
        # group children flatten in document order
        for child in el:
            if child.tag in (f"{_P}sp", f"{_P}graphicFrame", f"{_P}grpSp"):
                blocks.extend(_shape_blocks(child))
    return blocks


def _extract_notes(archive: DeckArchive, slide_path: str) -> str | None:
    rels = parse_relationships(archive, slide_path)
    notes_path = next(
        (rel["target"] for rel in rels.values() if rel["type"].endswith("/notesSlide")),
        None,
    )
    if notes_path is None or notes_path not in archive.entries:
        return None
    try:
        root = ElementTree.fromstring(archive.entries[notes_path])
    except ElementTree.ParseError as exc:
        logger.warning("%s: notes part %s unparseable: %s", archive.source_name, notes_path, exc)
        return None
    body_texts = []
    for sp in root.iter(f"{_P}sp"):
        if _ph_type(sp) == "body":
            body_texts.append(_shape_text(sp))
    text = "\n".join(t for t in body_texts if t.strip())
    return text if text.strip() else None


def _resolved_pictures(archive: DeckArchive, slide_path: str, slide_index: int):
    """(asset id, media container path) per picture, in shape order.

    Pictures with dangling relationships or missing media parts are
    skipped with a warning so ids stay aligned between the slide record
    and the exported assets.
    """
    try:
        root = ElementTree.fromstring(archive.entries[slide_path])
    except ElementTree.ParseError:
        return []
    rels = parse_relationships(archive, slide_path)
    resolved = []
    for pic in root.iter(f"{_P}pic"):
        blip = pic.find(f"{_P}blipFill/{_A}blip")
        rid = blip.get(R_EMBED, "") if blip is not None else ""
        rel = rels.get(rid)
        if rel is None or rel["target"] not in archive.entries:
            logger.warning("%s: slide %d picture media missing (rel %s)",
                           archive.source_name, slide_index, rid or "<none>")
            continue
        resolved.append((f"slide{slide_index}-image{len(resolved)}", rel["target"]))
    return resolved
