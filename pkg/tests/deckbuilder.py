"""Authoring tool for fixture decks.

Writes minimal Open XML presentation containers from a slide manifest.
Completely independent of the package's parser: parts are emitted as
string templates into a zipfile, so the manifest doubles as the oracle
for what extraction must recover.
"""

from __future__ import annotations

import io
import struct
import zipfile
import zlib
from dataclasses import dataclass, field
from xml.sax.saxutils import escape

P_NS = "http://schemas.openxmlformats.org/presentationml/2006/main"
A_NS = "http://schemas.openxmlformats.org/drawingml/2006/main"
R_NS = "http://schemas.openxmlformats.org/officeDocument/2006/relationships"
PKG_REL_NS = "http://schemas.openxmlformats.org/package/2006/relationships"
CT_NS = "http://schemas.openxmlformats.org/package/2006/content-types"

XML_DECL = '<?xml version="1.0" encoding="UTF-8" standalone="yes"?>\n'


@dataclass
class SlideSpec:
    """Authoring manifest for one slide (also the extraction oracle)."""

    title: str | None = None
    bullets: list[tuple[str, int]] = field(default_factory=list)
    paragraphs: list[str] = field(default_factory=list)
    notes: str | None = None
    images: list[bytes] = field(default_factory=list)
    table: list[list[str]] | None = None
    group_texts: list[str] = field(default_factory=list)

    def expected_blocks(self) -> list[tuple[str, int, bool]]:
        """Body blocks the extractor must produce, in reading order."""
        blocks = [(text, level, True) for text, level in self.bullets]
        blocks += [(text, 0, False) for text in self.paragraphs]
        if self.table:
            blocks += [(cell, 0, False) for row in self.table for cell in row if cell.strip()]
        blocks += [(text, 0, False) for text in self.group_texts]
        return blocks

    def expected_raw_text(self) -> str:
        parts = [] if self.title is None else [self.title]
        parts += [text for text, _, _ in self.expected_blocks()]
        if self.notes is not None:
            parts.append(self.notes)
        return "\n".join(parts)


def make_png(rgb: tuple[int, int, int], size: int = 2) -> bytes:
    """Tiny solid-color PNG, distinct bytes per color."""

    def chunk(kind: bytes, payload: bytes) -> bytes:
        crc = zlib.crc32(kind + payload) & 0xFFFFFFFF
        return struct.pack(">I", len(payload)) + kind + payload + struct.pack(">I", crc)

    ihdr = struct.pack(">IIBBBBB", size, size, 8, 2, 0, 0, 0)
    row = b"\x00" + bytes(rgb) * size
    idat = zlib.compress(row * size)
    return b"\x89PNG\r\n\x1a\n" + chunk(b"IHDR", ihdr) + chunk(b"IDAT", idat) + chunk(b"IEND", b"")


def _sp(shape_id: int, name: str, ph: str | None, x: int, y: int, paragraphs: list[str]) -> str:
    ph_xml = f'<p:ph type="{ph}"/>' if ph else ""
    return (
        f'<p:sp><p:nvSpPr><p:cNvPr id="{shape_id}" name="{escape(name)}"/>'
        f"<p:cNvSpPr/><p:nvPr>{ph_xml}</p:nvPr></p:nvSpPr>"
        f'<p:spPr><a:xfrm><a:off x="{x}" y="{y}"/><a:ext cx="6096000" cy="1143000"/></a:xfrm></p:spPr>'
        f"<p:txBody><a:bodyPr/>{''.join(paragraphs)}</p:txBody></p:sp>"
    )


def _para(text: str, level: int = 0, bullet: bool = False) -> str:
    if bullet:
        ppr = f'<a:pPr lvl="{level}"><a:buChar char="•"/></a:pPr>'
    else:
        ppr = '<a:pPr><a:buNone/></a:pPr>'
    return f"<a:p>{ppr}<a:r><a:rPr lang=\"en-US\"/><a:t>{escape(text)}</a:t></a:r></a:p>"


def _pic(shape_id: int, rid: str, x: int, y: int) -> str:
    return (
        f'<p:pic><p:nvPicPr><p:cNvPr id="{shape_id}" name="Picture {shape_id}"/>'
        f"<p:cNvPicPr/><p:nvPr/></p:nvPicPr>"
        f'<p:blipFill><a:blip r:embed="{rid}"/><a:stretch><a:fillRect/></a:stretch></p:blipFill>'
        f'<p:spPr><a:xfrm><a:off x="{x}" y="{y}"/><a:ext cx="914400" cy="914400"/></a:xfrm></p:spPr></p:pic>'
    )


def _table(shape_id: int, rows: list[list[str]], x: int, y: int) -> str:
    cells_xml = []
    for row in rows:
        tcs = "".join(
            f"<a:tc><a:txBody><a:bodyPr/>{_para(cell)}</a:txBody><a:tcPr/></a:tc>"
            for cell in row
        )
        cells_xml.append(f'<a:tr h="370840">{tcs}</a:tr>')
    grid = "".join('<a:gridCol w="2000000"/>' for _ in rows[0])
    return (
        f'<p:graphicFrame><p:nvGraphicFramePr><p:cNvPr id="{shape_id}" name="Table {shape_id}"/>'
        f"<p:cNvGraphicFramePr/><p:nvPr/></p:nvGraphicFramePr>"
        f'<p:xfrm><a:off x="{x}" y="{y}"/><a:ext cx="6000000" cy="1000000"/></p:xfrm>'
        f'<a:graphic><a:graphicData uri="{A_NS.rsplit("/", 1)[0]}/table">'
        f"<a:tbl><a:tblGrid>{grid}</a:tblGrid>{''.join(cells_xml)}</a:tbl>"
        f"</a:graphicData></a:graphic></p:graphicFrame>"
    )


def _group(shape_id: int, texts: list[str], x: int, y: int) -> str:
    children = "".join(
        _sp(shape_id + 1 + i, f"GroupChild {i}", None, x + i * 10000, y + i * 10000, [_para(t)])
        for i, t in enumerate(texts)
    )
    return (
        f'<p:grpSp><p:nvGrpSpPr><p:cNvPr id="{shape_id}" name="Group {shape_id}"/>'
        f"<p:cNvGrpSpPr/><p:nvPr/></p:nvGrpSpPr>"
        f'<p:grpSpPr><a:xfrm><a:off x="{x}" y="{y}"/><a:ext cx="3000000" cy="2000000"/></a:xfrm></p:grpSpPr>'
        f"{children}</p:grpSp>"
    )


def slide_xml(spec: SlideSpec, image_rids: list[str], raw_shapes: list[str] | None = None) -> str:
    shapes = []
    sid = 2
    y = 0
    if spec.title is not None:
        shapes.append(_sp(sid, "Title 1", "title", 100, y, [_para(spec.title)]))
        sid += 1
        y += 1200000
    body_paras = [_para(t, lvl, True) for t, lvl in spec.bullets]
    body_paras += [_para(t) for t in spec.paragraphs]
    if body_paras:
        shapes.append(_sp(sid, "Content 2", "body", 100, y, body_paras))
        sid += 1
        y += 1200000
    if spec.table:
        shapes.append(_table(sid, spec.table, 100, y))
        sid += 1
        y += 1200000
    if spec.group_texts:
        shapes.append(_group(sid, spec.group_texts, 100, y))
        sid += 10
        y += 1200000
    for rid in image_rids:
        shapes.append(_pic(sid, rid, 100, y))
        sid += 1
        y += 1000000
    if raw_shapes:
        shapes.extend(raw_shapes)
    return (
        XML_DECL
        + f'<p:sld xmlns:a="{A_NS}" xmlns:r="{R_NS}" xmlns:p="{P_NS}">'
        + "<p:cSld><p:spTree>"
        + '<p:nvGrpSpPr><p:cNvPr id="1" name=""/><p:cNvGrpSpPr/><p:nvPr/></p:nvGrpSpPr><p:grpSpPr/>'
        + "".join(shapes)
        + "</p:spTree></p:cSld></p:sld>"
    )


def notes_xml(notes: str) -> str:
    return (
        XML_DECL
        + f'<p:notes xmlns:a="{A_NS}" xmlns:r="{R_NS}" xmlns:p="{P_NS}">'
        + "<p:cSld><p:spTree>"
        + '<p:nvGrpSpPr><p:cNvPr id="1" name=""/><p:cNvGrpSpPr/><p:nvPr/></p:nvGrpSpPr><p:grpSpPr/>'
        + _sp(2, "Notes Placeholder", "body", 0, 0, [_para(line) for line in notes.split("\n")])
        + "</p:spTree></p:cSld></p:notes>"
    )


def build_pptx(slides: list[SlideSpec], raw_slide_shapes: dict[int, list[str]] | None = None) -> bytes:
    """Assemble the container; returns the .pptx bytes."""
    raw_slide_shapes = raw_slide_shapes or {}
    parts: dict[str, bytes] = {}
    overrides = [
        ("/ppt/presentation.xml",
         "application/vnd.openxmlformats-officedocument.presentationml.presentation.main+xml"),
    ]

    media: dict[bytes, str] = {}  # payload -> part path (dedup identical bytes)
    pres_rels = []
    for n, spec in enumerate(slides, start=1):
        slide_part = f"ppt/slides/slide{n}.xml"
        overrides.append((f"/{slide_part}",
                          "application/vnd.openxmlformats-officedocument.presentationml.slide+xml"))
        pres_rels.append(
            f'<Relationship Id="rId{n}" Type="{R_NS}/slide" Target="slides/slide{n}.xml"/>'
        )
        slide_rels = []
        image_rids = []
        rid_counter = 1
        for payload in spec.images:
            if payload not in media:
                media[payload] = f"ppt/media/image{len(media) + 1}.png"
                parts[media[payload]] = payload
            rid = f"rId{rid_counter}"
            rid_counter += 1
            image_rids.append(rid)
            target = "../" + media[payload].removeprefix("ppt/")
            slide_rels.append(f'<Relationship Id="{rid}" Type="{R_NS}/image" Target="{target}"/>')
        if spec.notes is not None:
            notes_part = f"ppt/notesSlides/notesSlide{n}.xml"
            parts[notes_part] = notes_xml(spec.notes).encode("utf-8")
            overrides.append((f"/{notes_part}",
                              "application/vnd.openxmlformats-officedocument.presentationml.notesSlide+xml"))
            rid = f"rId{rid_counter}"
            rid_counter += 1
            slide_rels.append(
                f'<Relationship Id="{rid}" Type="{R_NS}/notesSlide" Target="../notesSlides/notesSlide{n}.xml"/>'
            )
        parts[slide_part] = slide_xml(spec, image_rids, raw_slide_shapes.get(n - 1)).encode("utf-8")
        if slide_rels:
            parts[f"ppt/slides/_rels/slide{n}.xml.rels"] = (
                XML_DECL + f'<Relationships xmlns="{PKG_REL_NS}">' + "".join(slide_rels) + "</Relationships>"
            ).encode("utf-8")

    sld_ids = "".join(
        f'<p:sldId id="{255 + n}" r:id="rId{n}"/>' for n in range(1, len(slides) + 1)
    )
    parts["ppt/presentation.xml"] = (
        XML_DECL
        + f'<p:presentation xmlns:a="{A_NS}" xmlns:r="{R_NS}" xmlns:p="{P_NS}">'
        + (f"<p:sldIdLst>{sld_ids}</p:sldIdLst>" if sld_ids else "<p:sldIdLst/>")
        + '<p:sldSz cx="12192000" cy="6858000"/></p:presentation>'
    ).encode("utf-8")
    parts["ppt/_rels/presentation.xml.rels"] = (
        XML_DECL + f'<Relationships xmlns="{PKG_REL_NS}">' + "".join(pres_rels) + "</Relationships>"
    ).encode("utf-8")
    parts["_rels/.rels"] = (
        XML_DECL
        + f'<Relationships xmlns="{PKG_REL_NS}">'
        + f'<Relationship Id="rId1" Type="{R_NS}/officeDocument" Target="ppt/presentation.xml"/>'
        + "</Relationships>"
    ).encode("utf-8")

    defaults = (
        '<Default Extension="rels" ContentType="application/vnd.openxmlformats-package.relationships+xml"/>'
        '<Default Extension="xml" ContentType="application/xml"/>'
        '<Default Extension="png" ContentType="image/png"/>'
    )
    override_xml = "".join(
        f'<Override PartName="{name}" ContentType="{ctype}"/>' for name, ctype in overrides
    )
    parts["[Content_Types].xml"] = (
        XML_DECL + f'<Types xmlns="{CT_NS}">' + defaults + override_xml + "</Types>"
    ).encode("utf-8")

    buf = io.BytesIO()
    with zipfile.ZipFile(buf, "w", zipfile.ZIP_DEFLATED) as zf:
        for name in sorted(parts):
            info = zipfile.ZipInfo(name, date_time=(2024, 1, 1, 0, 0, 0))
            zf.writestr(info, parts[name])
    return buf.getvalue()


# --- fixture manifests ---

_TOPICS = [
    "Digital Transformation Foundations", "Legacy System Assessment", "Cloud Migration Strategy",
    "Data Platform Architecture", "API Gateway Design", "Microservice Decomposition",
    "Event Driven Integration", "Identity and Access", "Zero Trust Networking",
    "Observability Baseline", "Incident Response Playbooks", "Capacity Planning",
    "Cost Governance", "DevOps Toolchain", "Continuous Delivery Pipelines",
    "Infrastructure as Code", "Container Orchestration", "Service Mesh Adoption",
    "Edge Computing Patterns", "Streaming Analytics", "Feature Store Design",
    "Model Serving Infrastructure", "Responsible AI Guardrails", "Process Mining",
    "Robotic Process Automation", "Customer Journey Mapping", "Omnichannel Experience",
    "Digital Twin Modeling", "IoT Field Deployment", "Predictive Maintenance",
    "Supply Chain Visibility", "Smart Factory Metrics", "Change Management",
    "Skills Uplift Program", "Agile Operating Model", "Platform Team Topologies",
    "Security by Design", "Compliance Automation", "Roadmap and Governance",
]


def case_study_slides(n: int = 39, with_images: bool = True) -> list[SlideSpec]:
    """Deterministic synthetic deck shaped like a 39-slide technical course."""
    slides = []
    for i in range(n):
        topic = _TOPICS[i % len(_TOPICS)]
        bullets = [
            (f"Why {topic.lower()} matters for the transformation roadmap", 0),
            (f"Key practice {i + 1}: align {topic.split()[0].lower()} work with business outcomes", 0),
            (f"Pitfall: treating {topic.split()[-1].lower()} as a one-off project", 1),
        ]
        spec = SlideSpec(
            title=f"Topic {i + 1}: {topic}",
            bullets=bullets,
            paragraphs=[f"Summary: {topic} anchors section {i // 5 + 1} of the course."],
            notes=(f"Presenter note {i + 1}: emphasize the {topic.lower()} case study."
                   if i % 3 == 0 else None),
        )
        if with_images and i in (5, 13, 21):
            spec.images = [make_png((10 + i, 60, 200 - i))]
        slides.append(spec)
    return slides


def fixture_corpus() -> dict[str, list[SlideSpec]]:
    """The authored fixture decks keyed by name (sizes 0, 1, 2, 10, 39)."""
    two_pngs = [make_png((200, 30, 30)), make_png((30, 200, 30))]
    return {
        "empty": [],
        "single": [SlideSpec(
            title="Introduction",
            bullets=[("What is DX?", 0)],
        )],
        "pair": [
            SlideSpec(
                title="Introduction",
                bullets=[("What is DX?", 0)],
                notes="Welcome the class.",
            ),
            SlideSpec(
                title="Agenda",
                bullets=[("History", 0), ("Tooling", 0), ("Outlook", 1)],
                paragraphs=["Homework due Friday."],
                images=[two_pngs[0]],
            ),
        ],
        "ten": [
            SlideSpec(
                title=f"Unit {i}: {_TOPICS[i]}",
                bullets=[(f"Goal {i}.{j}: practice {_TOPICS[i].split()[0].lower()}", j % 2)
                         for j in range(1, 4)],
                notes=f"Note for unit {i}." if i % 2 == 0 else None,
                images=[two_pngs[i % 2]] if i in (3, 7) else [],
                table=[["Term", "Meaning"], [f"T{i}", f"Definition {i}"]] if i == 4 else None,
                group_texts=[f"Grouped callout {i}A", f"Grouped callout {i}B"] if i == 6 else [],
            )
            for i in range(10)
        ],
        "case39": case_study_slides(39),
    }
