"""Open XML presentation container: validation and part resolution."""

from __future__ import annotations

import io
import posixpath
import shlex
import subprocess
import tempfile
import zipfile
from dataclasses import dataclass, field
from pathlib import Path
from xml.etree import ElementTree

from ..errors import CorruptContainer, NotAnArchive, NotAPresentation, UnsupportedFormat

ZIP_MAGIC = b"PK\x03\x04"
CONTENT_TYPES_PART = "[Content_Types].xml"
PRESENTATION_CONTENT_TYPE = (
    "application/vnd.openxmlformats-officedocument.presentationml.presentation.main+xml"
)

NS = {
    "p": "http://schemas.openxmlformats.org/presentationml/2006/main",
    "a": "http://schemas.openxmlformats.org/drawingml/2006/main",
    "r": "http://schemas.openxmlformats.org/officeDocument/2006/relationships",
    "rel": "http://schemas.openxmlformats.org/package/2006/relationships",
    "ct": "http://schemas.openxmlformats.org/package/2006/content-types",
}

R_ID = f"{{{NS['r']}}}id"
R_EMBED = f"{{{NS['r']}}}embed"


@dataclass
class DeckArchive:
    entries: dict[str, bytes]
    source_name: str
    presentation_path: str = ""
    slide_paths: list[str] = field(default_factory=list)


def open_deck(data: bytes, source_name: str) -> DeckArchive:
    """Validate the container and resolve slide parts in presentation order."""
    if data[:4] != ZIP_MAGIC:
        raise NotAnArchive(f"{source_name}: missing ZIP local-file magic")
    try:
        with zipfile.ZipFile(io.BytesIO(data)) as archive:
            entries = {info.filename: archive.read(info.filename) for info in archive.infolist()}
    except (zipfile.BadZipFile, zipfile.LargeZipFile, OSError) as exc:
        raise CorruptContainer(f"{source_name}: unreadable container: {exc}") from exc

    if CONTENT_TYPES_PART not in entries:
        raise NotAPresentation(f"{source_name}: no content-types declaration part")

    presentation_path = _find_presentation_part(entries, source_name)
    slide_paths = _resolve_slide_paths(entries, presentation_path, source_name)
    for path in slide_paths:
        if path not in entries:
            raise CorruptContainer(f"{source_name}: referenced slide part {path} is missing")
    return DeckArchive(
        entries=entries,
        source_name=source_name,
        presentation_path=presentation_path,
        slide_paths=slide_paths,
    )


def convert_legacy_deck(data: bytes, converter_cmd: str) -> bytes:
    """Convert a legacy binary deck via <converter> <input.ppt> <output.pptx>."""
    if not converter_cmd:
        raise UnsupportedFormat("legacy .ppt needs a configured converter command")
    argv = shlex.split(converter_cmd)
    with tempfile.TemporaryDirectory(prefix="slideforge-ppt-") as tmp:
        src = Path(tmp) / "input.ppt"
        dst = Path(tmp) / "output.pptx"
        src.write_bytes(data)
        try:
            proc = subprocess.run(argv + [str(src), str(dst)], capture_output=True,
                                  timeout=300, check=False)
        except FileNotFoundError as exc:
            raise UnsupportedFormat(f"converter not installed: {argv[0]}") from exc
        if proc.returncode != 0 or not dst.exists():
            raise UnsupportedFormat(
                f"converter exited {proc.returncode}: {proc.stderr.decode(errors='replace')[:200]}"
            )
        return dst.read_bytes()


def rels_path_for(part_path: str) -> str:
    head, tail = posixpath.split(part_path)
    return posixpath.join(head, "_rels", tail + ".rels")


def parse_relationships(archive: DeckArchive, part_path: str) -> dict[str, dict[str, str]]:
    """Relationship id -> {target (container path), type} for one part."""
    rels_part = rels_path_for(part_path)
    data = archive.entries.get(rels_part)
    if data is None:
        return {}
    try:
        root = ElementTree.fromstring(data)
    except ElementTree.ParseError as exc:
        raise CorruptContainer(f"{archive.source_name}: bad relationships {rels_part}: {exc}") from exc
    base = posixpath.dirname(part_path)
    rels = {}
    for rel in root.findall("rel:Relationship", NS):
        rid = rel.get("Id", "")
        target = rel.get("Target", "")
        if target.startswith("/"):
            resolved = target[1:]
        else:
            resolved = posixpath.normpath(posixpath.join(base, target))
        rels[rid] = {"target": resolved, "type": rel.get("Type", "")}
    return rels


def _find_presentation_part(entries: dict[str, bytes], source_name: str) -> str:
    try:
        root = ElementTree.fromstring(entries[CONTENT_TYPES_PART])
    except ElementTree.ParseError as exc:
        raise CorruptContainer(f"{source_name}: bad content-types part: {exc}") from exc
    for override in root.findall("ct:Override", NS):
        if override.get("ContentType") == PRESENTATION_CONTENT_TYPE:
            return override.get("PartName", "").lstrip("/")
    if "ppt/presentation.xml" in entries:
        return "ppt/presentation.xml"
    raise NotAPresentation(f"{source_name}: no presentation part declared")


def _resolve_slide_paths(entries: dict[str, bytes], presentation_path: str, source_name: str) -> list[str]:
    data = entries.get(presentation_path)
    if data is None:
        raise NotAPresentation(f"{source_name}: presentation part {presentation_path} missing")
    try:
        root = ElementTree.fromstring(data)
    except ElementTree.ParseError as exc:
        raise CorruptContainer(f"{source_name}: bad presentation part: {exc}") from exc

    shim = DeckArchive(entries=entries, source_name=source_name)
    rels = parse_relationships(shim, presentation_path)

    paths = []
    for slide_id in root.findall("p:sldIdLst/p:sldId", NS):
        rid = slide_id.get(R_ID, "")
        rel = rels.get(rid)
        if rel is None:
            raise CorruptContainer(f"{source_name}: slide relationship {rid} undeclared")
        paths.append(rel["target"])
    return paths
