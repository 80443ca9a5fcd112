"""Command-line access to the pipeline: extract, kb add, generate, serve."""

from __future__ import annotations

import argparse
import logging
import sys
import tempfile
from pathlib import Path

from .deck.container import convert_legacy_deck
from .deck.model import deck_from_json, deck_to_json
from .errors import SlideforgeError
from .kb.index import VectorIndex
from .kb.ingest import ingest_document
from .kb.splitter import split_text
from .service.config import build_clients, load_config
from .service.pipeline import extract_stage, generate_textbook
from .textbook.customization import DIFFICULTIES, STYLES, CustomizationSpec

logger = logging.getLogger("slideforge.cli")

KB_INDEX_NAME = "index.sfix"

_KIND_BY_SUFFIX = {".md": "markdown", ".markdown": "markdown", ".pdf": "pdf-via-extractor"}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="slideforge",
                                     description="Slide decks to customized textbooks.")
    parser.add_argument("--config", help="TOML/JSON config file (overrides environment)")
    sub = parser.add_subparsers(dest="command", required=True)

    p_extract = sub.add_parser("extract", help="parse a deck into canonical JSON")
    p_extract.add_argument("file", help="input .pptx (or .ppt with a configured converter)")
    p_extract.add_argument("-o", "--output", required=True, help="output deck JSON path")

    p_kb = sub.add_parser("kb", help="knowledge base maintenance")
    kb_sub = p_kb.add_subparsers(dest="kb_command", required=True)
    p_add = kb_sub.add_parser("add", help="ingest a document into a knowledge base")
    p_add.add_argument("doc", help="source document (.txt, .md, or .pdf via extractor)")
    p_add.add_argument("--kb", required=True, help="knowledge base directory")
    p_add.add_argument("--title", default="", help="document title for citations")
    p_add.add_argument("--kind", choices=["plain-text", "markdown", "pdf-via-extractor"],
                       help="override the kind inferred from the extension")

    p_gen = sub.add_parser("generate", help="produce a textbook from a deck")
    p_gen.add_argument("input", help="input .pptx or a previously extracted deck.json")
    p_gen.add_argument("--kb", help="knowledge base directory for local references")
    p_gen.add_argument("--language", default="en")
    p_gen.add_argument("--style", default="academic", choices=list(STYLES))
    p_gen.add_argument("--difficulty", default="introductory", choices=list(DIFFICULTIES))
    p_gen.add_argument("--model", default="stub-echo")
    p_gen.add_argument("--no-exercises", action="store_true")
    p_gen.add_argument("-o", "--output", required=True, help="output Markdown path")

    p_serve = sub.add_parser("serve", help="run the REST service")
    p_serve.add_argument("--port", type=int, help="listen port")
    p_serve.add_argument("--workdir", help="job working directory")
    p_serve.add_argument("--host", default="127.0.0.1")
    return parser


def _load_kb(kb_dir: str | None) -> VectorIndex | None:
    if not kb_dir:
        return None
    path = Path(kb_dir) / KB_INDEX_NAME
    return VectorIndex.load(path) if path.exists() else None


def _read_deck_bytes(path: Path, converter_cmd: str) -> bytes:
    data = path.read_bytes()
    if path.suffix.lower() == ".ppt":
        return convert_legacy_deck(data, converter_cmd)
    return data


def _cmd_extract(args, config) -> int:
    clients = build_clients(config)
    source = Path(args.file)
    output = Path(args.output)
    output.parent.mkdir(parents=True, exist_ok=True)
    data = _read_deck_bytes(source, config.ppt_converter)
    deck, _hit = extract_stage(data, source.name, output.parent, clients.ocr,
                               config.language_hints)
    output.write_text(deck_to_json(deck), encoding="utf-8")
    print(f"extracted {deck.slide_count} slides -> {output}")
    return 0


def _cmd_kb_add(args, config) -> int:
    clients = build_clients(config)
    kb_dir = Path(args.kb)
    kb_dir.mkdir(parents=True, exist_ok=True)
    index_path = kb_dir / KB_INDEX_NAME
    index = VectorIndex.load(index_path) if index_path.exists() else VectorIndex(clients.embed.dim)

    doc_path = Path(args.doc)
    kind = args.kind or _KIND_BY_SUFFIX.get(doc_path.suffix.lower(), "plain-text")
    doc = ingest_document(doc_path.read_bytes(), kind=kind,
                          title=args.title or doc_path.stem, origin=str(doc_path))
    chunks = split_text(doc.full_text, doc_id=doc.id)
    vectors = clients.embed.embed_batch([c.text for c in chunks])
    for chunk, vector in zip(chunks, vectors):
        index.add(chunk, vector, origin=doc.origin, title=doc.title)
    index.save(index_path)
    print(f"indexed {len(chunks)} chunks from {doc_path} ({len(index)} total) -> {index_path}")
    return 0


def _cmd_generate(args, config) -> int:
    clients = build_clients(config)
    spec = CustomizationSpec(
        output_language=args.language,
        style=args.style,
        difficulty=args.difficulty,
        model_id=args.model,
        include_exercises=not args.no_exercises,
    )
    spec.validate()
    if not clients.llm.knows(spec.model_id):
        raise SlideforgeError(f"model {spec.model_id!r} is not registered; "
                              "add it to [models] in the config file")

    source = Path(args.input)
    if source.suffix.lower() == ".json":
        deck = deck_from_json(source.read_text(encoding="utf-8"))
    else:
        with tempfile.TemporaryDirectory(prefix="slideforge-extract-") as tmp:
            data = _read_deck_bytes(source, config.ppt_converter)
            deck, _hit = extract_stage(data, source.name, Path(tmp), clients.ocr,
                                       config.language_hints)

    kb = _load_kb(args.kb)
    _book, markdown, plan = generate_textbook(deck, spec, clients, kb=kb,
                                              settings=config.retrieval)
    output = Path(args.output)
    output.parent.mkdir(parents=True, exist_ok=True)
    output.write_text(markdown, encoding="utf-8")
    print(f"wrote {len(plan.chapters)} chapters -> {output}")
    return 0


def _cmd_serve(args, config) -> int:
    import uvicorn

    from .service.app import create_app

    if args.port is not None:
        config.port = args.port
    if args.workdir:
        config.workdir = Path(args.workdir)
    app = create_app(config)
    uvicorn.run(app, host=args.host, port=config.port, log_level="info")
    return 0


def cli_main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    config = load_config(args.config)
    try:
        if args.command == "extract":
            return _cmd_extract(args, config)
        if args.command == "kb":
            return _cmd_kb_add(args, config)
        if args.command == "generate":
            return _cmd_generate(args, config)
        if args.command == "serve":
            return _cmd_serve(args, config)
    except SlideforgeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 2


def main() -> None:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
