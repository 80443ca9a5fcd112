"""Chapter structure planning with strict-JSON parsing and repair."""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass, field

from ..deck.model import DeckExtract
from ..errors import EmptyDeck, PlanningFailed
from .customization import CustomizationSpec
from .llm import LlmClient

logger = logging.getLogger("slideforge.textbook")

PLANNING_TEMPERATURE = 0.3
PLANNING_RETRIES = 2  # re-prompts after the first attempt

PLANNING_SYSTEM_PROMPT = (
    "You are an expert textbook author planning the chapter structure of a "
    "textbook built from a lecture slide deck. You respond with strict JSON "
    "and nothing else."
)


@dataclass
class ChapterPlan:
    number: int  # 1-based
    title: str
    summary: str
    slide_indices: list[int]


@dataclass
class BookPlan:
    book_title: str
    chapters: list[ChapterPlan] = field(default_factory=list)


def planning_user_prompt(deck: DeckExtract, spec: CustomizationSpec) -> str:
    lines = [f"Deck: {deck.source_name}", "Slides:"]
    for slide in deck.slides:
        label = slide.title or ""
        first_body = slide.body_blocks[0].text.replace("\n", " ") if slide.body_blocks else ""
        lines.append(f"- Slide {slide.index}: {label} | {first_body}")
    lines += [
        "",
        f"Plan a textbook in {spec.output_language} ({spec.style} style, "
        f"{spec.difficulty} difficulty) over these slides.",
        "Group the slides into coherent chapters in slide order.",
        "Respond with strict JSON only, exactly this shape:",
        '{"book_title": string, "chapters": '
        '[{"title": string, "summary": string, "slide_indices": [int, ...]}]}',
        "Every slide index must appear in exactly one chapter.",
    ]
    return "\n".join(lines)


def plan_structure(deck: DeckExtract, spec: CustomizationSpec, llm: LlmClient) -> BookPlan:
    """Ask the model for a chapter plan, re-prompting on malformed JSON.

    After validation, a repair pass drops out-of-range and duplicate
    indices and assigns every unassigned slide to the chapter holding its
    nearest assigned neighbor (lower index wins ties).
    """
    if deck.slide_count < 1:
        raise EmptyDeck(deck.source_name)
    user_prompt = planning_user_prompt(deck, spec)
    last_error = "model returned no plan"
    for attempt in range(1 + PLANNING_RETRIES):
        raw = llm.complete(spec.model_id, PLANNING_SYSTEM_PROMPT, user_prompt,
                           temperature=PLANNING_TEMPERATURE)
        try:
            plan = _parse_plan(raw, deck.slide_count)
        except ValueError as exc:
            last_error = str(exc)
            logger.warning("plan attempt %d malformed: %s", attempt + 1, exc)
            user_prompt = (
                planning_user_prompt(deck, spec)
                + f"\nYour previous reply was not valid: {last_error}. "
                  "Respond with strict JSON only."
            )
            continue
        return plan
    raise PlanningFailed(f"all {1 + PLANNING_RETRIES} attempts malformed: {last_error}")


def _strip_fences(text: str) -> str:
    text = text.strip()
    match = re.match(r"^```[a-zA-Z]*\n(.*)\n```$", text, re.DOTALL)
    return match.group(1) if match else text


def _parse_plan(raw: str, slide_count: int) -> BookPlan:
    try:
        doc = json.loads(_strip_fences(raw))
    except json.JSONDecodeError as exc:
        raise ValueError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ValueError("top level must be a JSON object")
    title = doc.get("book_title")
    if not isinstance(title, str) or not title.strip():
        raise ValueError("book_title must be a non-empty string")
    chapters_raw = doc.get("chapters")
    if not isinstance(chapters_raw, list) or not chapters_raw:
        raise ValueError("chapters must be a non-empty array")

    chapters: list[ChapterPlan] = []
    assigned: set[int] = set()
    for entry in chapters_raw:
        if not isinstance(entry, dict):
            raise ValueError("each chapter must be an object")
        ch_title = entry.get("title")
        if not isinstance(ch_title, str) or not ch_title.strip():
            raise ValueError("chapter title must be a non-empty string")
        summary = entry.get("summary", "")
        if not isinstance(summary, str):
            raise ValueError("chapter summary must be a string")
        indices_raw = entry.get("slide_indices")
        if not isinstance(indices_raw, list) or not all(
            isinstance(i, int) and not isinstance(i, bool) for i in indices_raw
        ):
            raise ValueError("slide_indices must be an array of integers")
        # repair: out-of-range and already-claimed indices are dropped
        indices = sorted({i for i in indices_raw if 0 <= i < slide_count} - assigned)
        assigned.update(indices)
        if indices:
            chapters.append(ChapterPlan(0, ch_title.strip(), summary.strip(), indices))
    if not chapters:
        raise ValueError("no chapter kept any valid slide index")

    _assign_orphans(chapters, assigned, slide_count)
    for number, chapter in enumerate(chapters, start=1):
        chapter.number = number
        chapter.slide_indices.sort()
    return BookPlan(book_title=title.strip(), chapters=chapters)


def _assign_orphans(chapters: list[ChapterPlan], assigned: set[int], slide_count: int) -> None:
    orphans = [i for i in range(slide_count) if i not in assigned]
    for orphan in orphans:
        neighbor = min(assigned, key=lambda j: (abs(j - orphan), j))
        for chapter in chapters:
            if neighbor in chapter.slide_indices:
                chapter.slide_indices.append(orphan)
                break
        assigned.add(orphan)


def validate_plan(plan: BookPlan, slide_count: int) -> None:
    """Assert the exact-partition invariant; raises ValueError on violation."""
    seen: set[int] = set()
    for chapter in plan.chapters:
        if not chapter.slide_indices:
            raise ValueError(f"chapter {chapter.number} has no slides")
        if chapter.slide_indices != sorted(chapter.slide_indices):
            raise ValueError(f"chapter {chapter.number} indices not sorted")
        overlap = seen & set(chapter.slide_indices)
        if overlap:
            raise ValueError(f"slides {sorted(overlap)} assigned twice")
        seen.update(chapter.slide_indices)
    if seen != set(range(slide_count)):
        raise ValueError(f"plan covers {sorted(seen)}, deck has 0..{slide_count - 1}")
    if [c.number for c in plan.chapters] != list(range(1, len(plan.chapters) + 1)):
        raise ValueError("chapter numbers must be contiguous from 1")
