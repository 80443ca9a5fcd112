"""Per-chapter prompt assembly."""

from __future__ import annotations

from ..deck.model import DeckExtract
from ..retrieval.scoring import RetrievalBundle
from .customization import CustomizationSpec
from .planner import ChapterPlan

CHAPTER_SYSTEM_PROMPT = (
    "You are an expert textbook author. Write one textbook chapter with "
    "scholarly rigor and pedagogical clarity, staying faithful to the "
    "provided slide material and references.\n"
    "Output structure requirements:\n"
    "- Do not emit the chapter heading itself; it is added by the assembler.\n"
    "- Organize the body into level-3 (###) sections.\n"
    "- Cite references inline with their bracketed tags where they support a claim.\n"
    "{exercises_rule}"
)

EXERCISES_ON = "- End with a level-3 'Exercises' section of 2 to 4 exercises."
EXERCISES_OFF = "- Do not include an exercises section."


def build_chapter_prompt(
    chapter: ChapterPlan,
    deck: DeckExtract,
    bundle: RetrievalBundle,
    spec: CustomizationSpec,
) -> tuple[str, str]:
    """(system prompt, user prompt) for one chapter.

    The user prompt carries, in order: the customization block, each
    referenced slide's raw and OCR text labeled by slide index, then the
    reference snippets labeled [R1], [R2], ...
    """
    system_prompt = CHAPTER_SYSTEM_PROMPT.format(
        exercises_rule=EXERCISES_ON if spec.include_exercises else EXERCISES_OFF
    )

    lines = [
        "Customization:",
        f"- Language: {spec.output_language}",
        f"- Style: {spec.style}",
        f"- Difficulty: {spec.difficulty}",
        f"- Objectives: {'; '.join(spec.objectives) if spec.objectives else 'none specified'}",
        f"- Include exercises: {'yes' if spec.include_exercises else 'no'}",
        "",
        f"Chapter {chapter.number}: {chapter.title}",
        f"Summary: {chapter.summary}",
        "",
    ]
    for index in chapter.slide_indices:
        slide = deck.slides[index]
        lines.append(f"Slide {index} (raw text):")
        lines.append(slide.raw_text)
        if slide.ocr_text.strip():
            lines.append(f"Slide {index} (OCR text):")
            lines.append(slide.ocr_text)
        lines.append("")
    lines.append("References:")
    if bundle.references:
        for i, ref in enumerate(bundle.references, start=1):
            snippet = ref.snippet.replace("\n", " ")
            lines.append(f"[R{i}] {ref.title}: {snippet}")
    else:
        lines.append("(none)")
    return system_prompt, "\n".join(lines)
