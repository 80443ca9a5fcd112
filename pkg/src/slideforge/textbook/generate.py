"""Chapter generation and final book assembly."""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from datetime import datetime, timezone

from ..errors import ChapterFailed
from ..retrieval.citations import format_citations
from ..retrieval.scoring import Reference, dedup
from .customization import CustomizationSpec
from .llm import LlmClient
from .planner import BookPlan

logger = logging.getLogger("slideforge.textbook")

CHAPTER_TEMPERATURE = 0.7
CHAPTER_RETRIES = 2  # re-prompts after the first attempt


@dataclass
class ChapterDraft:
    number: int
    title: str
    body_markdown: str
    references: list[Reference] = field(default_factory=list)
    error: str | None = None


@dataclass
class Textbook:
    metadata: dict
    chapters: list[ChapterDraft]
    bibliography: list[Reference]


def generate_chapter(
    prompts: tuple[str, str],
    spec: CustomizationSpec,
    llm: LlmClient,
    number: int = 1,
    title: str = "",
) -> ChapterDraft:
    """Run the chapter prompt; empty output after all retries fails the chapter."""
    system_prompt, user_prompt = prompts
    for attempt in range(1 + CHAPTER_RETRIES):
        body = llm.complete(spec.model_id, system_prompt, user_prompt,
                            temperature=CHAPTER_TEMPERATURE).strip()
        if body:
            return ChapterDraft(number=number, title=title, body_markdown=body)
        logger.warning("chapter %d attempt %d returned empty output", number, attempt + 1)
    raise ChapterFailed(f"chapter {number} empty after {1 + CHAPTER_RETRIES} attempts")


def _slug(text: str) -> str:
    slug = re.sub(r"[^\w\s-]", "", text.lower(), flags=re.UNICODE)
    return re.sub(r"[\s]+", "-", slug).strip("-")


def assemble(
    plan: BookPlan,
    drafts: list[ChapterDraft],
    spec: CustomizationSpec,
    source_name: str = "",
    generated_at: datetime | None = None,
) -> tuple[Textbook, str]:
    """Stitch drafts into the final Markdown document.

    Layout: title heading, metadata block, linked table of contents,
    chapters in plan order (each under a level-2 'Chapter N: Title'
    heading, failed ones as an admonition naming the failure), then one
    References section over the merged, deduplicated bibliography.
    """
    stamp = (generated_at or datetime.now(timezone.utc)).strftime("%Y-%m-%dT%H:%M:%SZ")
    by_number = {d.number: d for d in drafts}

    bibliography: list[Reference] = []
    for chapter in plan.chapters:
        draft = by_number.get(chapter.number)
        if draft is not None:
            bibliography.extend(draft.references)
    bibliography.sort(key=lambda r: (-r.combined_score, 0 if r.kind == "academic" else 1))
    bibliography = dedup(bibliography, None)

    lines = [f"# {plan.book_title}", ""]
    lines += [
        f"- Source deck: {source_name}",
        f"- Model: {spec.model_id}",
        f"- Language: {spec.output_language}",
        f"- Style: {spec.style}",
        f"- Difficulty: {spec.difficulty}",
        f"- Generated: {stamp}",
        "",
        "## Contents",
        "",
    ]
    for chapter in plan.chapters:
        heading = f"Chapter {chapter.number}: {chapter.title}"
        lines.append(f"{chapter.number}. [{heading}](#{_slug(heading)})")
    lines.append("")

    for chapter in plan.chapters:
        draft = by_number.get(chapter.number)
        lines.append(f"## Chapter {chapter.number}: {chapter.title}")
        lines.append("")
        if draft is None or draft.error is not None:
            reason = draft.error if draft is not None else "chapter was never generated"
            lines.append(f"> **Generation failed.** {reason}")
        else:
            lines.append(draft.body_markdown)
        lines.append("")

    lines.append(format_citations(bibliography))
    markdown = "\n".join(lines) + "\n"

    book = Textbook(
        metadata={
            "source_name": source_name,
            "customization": spec.to_dict(),
            "generated_at": stamp,
            "model_id": spec.model_id,
        },
        chapters=[by_number[c.number] for c in plan.chapters if c.number in by_number],
        bibliography=bibliography,
    )
    return book, markdown


def textbook_to_json(book: Textbook, plan: BookPlan) -> dict:
    """Machine-readable mirror of the assembled textbook."""
    return {
        "metadata": book.metadata,
        "book_title": plan.book_title,
        "chapters": [
            {
                "number": d.number,
                "title": d.title,
                "body_markdown": d.body_markdown,
                "error": d.error,
                "references": [
                    {
                        "kind": r.kind,
                        "title": r.title,
                        "locator": r.locator,
                        "snippet": r.snippet,
                        "combined_score": r.combined_score,
                        "relevance_score": r.relevance_score,
                    }
                    for r in d.references
                ],
            }
            for d in book.chapters
        ],
        "bibliography": [
            {
                "kind": r.kind,
                "title": r.title,
                "locator": r.locator,
                "relevance_score": r.relevance_score,
            }
            for r in book.bibliography
        ],
    }
