"""The four-stage pipeline and its job-service wrapper."""

from __future__ import annotations

import hashlib
import logging
import re
import threading
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable

from ..deck.extract import extract_deck
from ..deck.model import DeckExtract, deck_from_json, deck_to_json
from ..deck.ocr import DEFAULT_LANGUAGE_HINTS, OcrEngine, ocr_deck
from ..errors import ChapterFailed, SlideforgeError
from ..kb.embeddings import CachingEmbeddingClient, EmbeddingClient
from ..kb.index import VectorIndex
from ..retrieval.scoring import relevance_score, retrieve_bundle
from ..retrieval.web import WebSearchClient
from ..textbook.customization import CustomizationSpec
from ..textbook.generate import ChapterDraft, Textbook, assemble, generate_chapter
from ..textbook.llm import LlmClient
from ..textbook.planner import BookPlan, ChapterPlan, plan_structure
from ..textbook.prompts import build_chapter_prompt
from ..textbook.quality import STOPWORDS
from .cache import TtlCache
from .jobs import JobStore

logger = logging.getLogger("slideforge.service")

QUERY_KEYWORDS = 5

# progress bands per stage
EXTRACT_END = 20
PLAN_END = 30
GENERATE_END = 90


@dataclass
class PipelineClients:
    llm: LlmClient
    embed: EmbeddingClient
    ocr: OcrEngine | None = None
    web: WebSearchClient | None = None


@dataclass
class PipelineSettings:
    language_hints: list[str] = field(default_factory=lambda: list(DEFAULT_LANGUAGE_HINTS))
    k_local: int = 5
    n_web: int = 5
    w_local: float = 0.7
    w_web: float = 0.3
    dedup_threshold: float = 0.95
    chapter_workers: int = 3


def chapter_query(chapter: ChapterPlan, deck: DeckExtract) -> str:
    """Chapter title plus the chapter slides' top keywords seed retrieval."""
    counts: Counter[str] = Counter()
    for index in chapter.slide_indices:
        for token in re.findall(r"[^\W_]+", deck.slides[index].raw_text.casefold()):
            if token not in STOPWORDS:
                counts[token] += 1
    top = [t for t, _ in sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))[:QUERY_KEYWORDS]]
    return " ".join([chapter.title, *top]).strip()


def generate_textbook(
    deck: DeckExtract,
    spec: CustomizationSpec,
    clients: PipelineClients,
    kb: VectorIndex | None = None,
    settings: PipelineSettings | None = None,
    now: Callable[[], datetime] | None = None,
    on_plan: Callable[[BookPlan], None] | None = None,
    on_chapter_done: Callable[[int, int], None] | None = None,
) -> tuple[Textbook, str, BookPlan]:
    """Plan, generate chapter-by-chapter (optionally in parallel), assemble.

    Failed chapters become placeholder sections; the final Markdown is
    independent of chapter completion order.
    """
    settings = settings or PipelineSettings()
    plan = plan_structure(deck, spec, clients.llm)
    if on_plan is not None:
        on_plan(plan)

    total = len(plan.chapters)
    done_count = 0
    lock_done = threading.Lock()

    def produce(chapter: ChapterPlan) -> ChapterDraft:
        bundle = retrieve_bundle(
            chapter_query(chapter, deck),
            kb,
            clients.embed,
            clients.web,
            k_local=settings.k_local,
            n_web=settings.n_web,
            w_local=settings.w_local,
            w_web=settings.w_web,
            sim_threshold=settings.dedup_threshold,
        )
        prompts = build_chapter_prompt(chapter, deck, bundle, spec)
        try:
            draft = generate_chapter(prompts, spec, clients.llm,
                                     number=chapter.number, title=chapter.title)
        except ChapterFailed as exc:
            logger.warning("chapter %d failed: %s", chapter.number, exc)
            return ChapterDraft(number=chapter.number, title=chapter.title,
                                body_markdown="", error=str(exc))
        for ref in bundle.references:
            if ref.snippet and draft.body_markdown:
                relevance_score(ref, draft.body_markdown, clients.embed)
        draft.references = bundle.references
        return draft

    def produce_and_count(chapter: ChapterPlan) -> ChapterDraft:
        nonlocal done_count
        draft = produce(chapter)
        with lock_done:
            done_count += 1
            current = done_count
        if on_chapter_done is not None:
            on_chapter_done(current, total)
        return draft

    if settings.chapter_workers > 1 and total > 1:
        with ThreadPoolExecutor(max_workers=settings.chapter_workers) as pool:
            drafts = list(pool.map(produce_and_count, plan.chapters))
    else:
        drafts = [produce_and_count(c) for c in plan.chapters]

    drafts.sort(key=lambda d: d.number)
    stamp = now() if now is not None else datetime.now(timezone.utc)
    book, markdown = assemble(plan, drafts, spec, source_name=deck.source_name,
                              generated_at=stamp)
    return book, markdown, plan


def extract_stage(
    data: bytes,
    source_name: str,
    workdir: Path,
    ocr_engine: OcrEngine | None,
    language_hints: list[str],
    cache: TtlCache | None = None,
) -> tuple[DeckExtract, bool]:
    """Extraction with optional caching keyed by the upload's content hash.

    Returns (deck, cache_hit). Cached runs skip parsing, export, and OCR;
    the stored canonical JSON is byte-identical to an uncached run.
    """
    key = f"deck:{hashlib.sha256(data).hexdigest()}"
    if cache is not None:
        blob = cache.get(key)
        if blob is not None:
            return deck_from_json(blob.decode("utf-8")), True
    deck, assets = extract_deck(data, source_name, workdir)
    if ocr_engine is not None and assets:
        ocr_deck(deck, assets, ocr_engine, language_hints)
    if cache is not None:
        cache.put(key, deck_to_json(deck).encode("utf-8"))
    return deck, False


def run_pipeline(
    job_id: str,
    upload_path: Path,
    spec: CustomizationSpec,
    store: JobStore,
    clients: PipelineClients,
    kb: VectorIndex | None = None,
    settings: PipelineSettings | None = None,
    cache: TtlCache | None = None,
    now: Callable[[], datetime] | None = None,
) -> None:
    """Execute all stages for one job, updating state and progress.

    Any stage error moves the job to failed with the stage name in the
    message; partial chapter failures still assemble.
    """
    settings = settings or PipelineSettings()
    job_dir = store.job_dir(job_id)
    stage = "extracting"
    try:
        store.transition(job_id, "extracting")
        data = upload_path.read_bytes()
        embed = clients.embed if cache is None else CachingEmbeddingClient(clients.embed, cache)
        deck, cache_hit = extract_stage(
            data, upload_path.name, job_dir, clients.ocr, settings.language_hints, cache
        )
        if cache_hit:
            logger.info("job %s: deck extraction served from cache", job_id)
        deck_json_path = job_dir / "deck.json"
        deck_json_path.write_text(deck_to_json(deck), encoding="utf-8")
        store.add_artifact(job_id, "deck_json", "deck.json")
        store.set_progress(job_id, EXTRACT_END)

        stage = "planning"
        store.transition(job_id, "planning")

        def on_plan(plan: BookPlan) -> None:
            nonlocal stage
            store.set_progress(job_id, PLAN_END, (0, len(plan.chapters)))
            store.transition(job_id, "generating")
            stage = "generating"

        def on_chapter_done(done: int, total: int) -> None:
            span = GENERATE_END - PLAN_END
            store.set_progress(job_id, PLAN_END + (span * done) // total, (done, total))

        stage_clients = PipelineClients(llm=clients.llm, embed=embed,
                                        ocr=clients.ocr, web=clients.web)
        # the generating stage begins once the plan callback fires
        book, markdown, plan = generate_textbook(
            deck, spec, stage_clients, kb=kb, settings=settings, now=now,
            on_plan=on_plan, on_chapter_done=on_chapter_done,
        )

        stage = "assembling"
        store.transition(job_id, "assembling")
        book_path = job_dir / "book.md"
        book_path.write_text(markdown, encoding="utf-8")
        store.add_artifact(job_id, "book_md", "book.md")
        store.set_progress(job_id, 100)
        store.transition(job_id, "done")
    except SlideforgeError as exc:
        logger.warning("job %s failed during %s: %s", job_id, stage, exc)
        store.set_error(job_id, f"{stage}: {exc}")
        store.transition(job_id, "failed")
    except Exception as exc:  # defensive: never leave a job stuck non-terminal
        logger.exception("job %s crashed during %s", job_id, stage)
        store.set_error(job_id, f"{stage}: unexpected error: {exc}")
        store.transition(job_id, "failed")
