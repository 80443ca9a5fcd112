from datetime import datetime, timezone

import pytest

from slideforge.errors import ChapterFailed
from slideforge.retrieval.scoring import Reference
from slideforge.textbook.customization import CustomizationSpec
from slideforge.textbook.generate import ChapterDraft, assemble, generate_chapter, textbook_to_json
from slideforge.textbook.llm import ScriptedLlmClient
from slideforge.textbook.planner import BookPlan, ChapterPlan

SPEC = CustomizationSpec()
STAMP = datetime(2024, 6, 1, 12, 0, 0, tzinfo=timezone.utc)


def test_generate_chapter_passthrough():
    llm = ScriptedLlmClient(["## Title\nBody."])
    draft = generate_chapter(("sys", "user"), SPEC, llm, number=1, title="T")
    assert draft.body_markdown == "## Title\nBody."
    assert draft.error is None


def test_generate_chapter_strips_whitespace():
    llm = ScriptedLlmClient(["\n\n  content  \n"])
    assert generate_chapter(("s", "u"), SPEC, llm).body_markdown == "content"


def test_generate_chapter_empty_three_times_fails():
    llm = ScriptedLlmClient(["", "", ""])
    with pytest.raises(ChapterFailed):
        generate_chapter(("s", "u"), SPEC, llm)
    assert len(llm.calls) == 3


def test_generate_chapter_empty_then_success():
    llm = ScriptedLlmClient(["", "recovered body"])
    draft = generate_chapter(("s", "u"), SPEC, llm)
    assert draft.body_markdown == "recovered body"
    assert len(llm.calls) == 2


def _plan(n):
    return BookPlan("The Book", [
        ChapterPlan(i + 1, f"Part {i + 1}", f"summary {i + 1}", [i]) for i in range(n)
    ])


def test_assemble_single_trivial_chapter():
    drafts = [ChapterDraft(1, "Part 1", "Some body text.")]
    _, markdown = assemble(_plan(1), drafts, SPEC, source_name="d.pptx", generated_at=STAMP)
    assert markdown.count("## Chapter 1:") == 1
    assert "_None._" in markdown
    assert markdown.startswith("# The Book\n")


def test_assemble_toc_in_plan_order():
    drafts = [ChapterDraft(i + 1, f"Part {i + 1}", f"body {i + 1}") for i in range(3)]
    _, markdown = assemble(_plan(3), drafts, SPEC, source_name="d.pptx", generated_at=STAMP)
    toc_start = markdown.index("## Contents")
    first = markdown.index("1. [Chapter 1: Part 1](#chapter-1-part-1)")
    second = markdown.index("2. [Chapter 2: Part 2](#chapter-2-part-2)")
    third = markdown.index("3. [Chapter 3: Part 3](#chapter-3-part-3)")
    assert toc_start < first < second < third


def test_assemble_metadata_block():
    spec = CustomizationSpec(output_language="ja", style="simplified", model_id="stub-echo")
    drafts = [ChapterDraft(1, "Part 1", "body")]
    _, markdown = assemble(_plan(1), drafts, spec, source_name="deck.pptx", generated_at=STAMP)
    assert "- Source deck: deck.pptx" in markdown
    assert "- Model: stub-echo" in markdown
    assert "- Language: ja" in markdown
    assert "- Generated: 2024-06-01T12:00:00Z" in markdown


def test_assemble_shared_url_listed_once():
    shared = Reference(kind="web", title="Shared", locator="https://same",
                       snippet="s", combined_score=0.3)
    other = Reference(kind="web", title="Shared", locator="https://same",
                      snippet="s", combined_score=0.15)
    drafts = [
        ChapterDraft(1, "Part 1", "b1", references=[shared]),
        ChapterDraft(2, "Part 2", "b2", references=[other]),
    ]
    _, markdown = assemble(_plan(2), drafts, SPEC, source_name="d", generated_at=STAMP)
    assert markdown.count("https://same") == 2  # one entry: linked title + bare URL line


def test_assemble_bibliography_sorted_by_score():
    low = Reference(kind="web", title="Low", locator="https://low", snippet="s",
                    combined_score=0.1)
    high = Reference(kind="academic", title="High", locator="papers/h.md", snippet="s",
                     combined_score=0.7)
    drafts = [
        ChapterDraft(1, "Part 1", "b1", references=[low]),
        ChapterDraft(2, "Part 2", "b2", references=[high]),
    ]
    _, markdown = assemble(_plan(2), drafts, SPEC, source_name="d", generated_at=STAMP)
    assert markdown.index("**High**") < markdown.index("[Low]")


def test_assemble_failed_chapter_placeholder():
    drafts = [
        ChapterDraft(1, "Part 1", "good body"),
        ChapterDraft(2, "Part 2", "", error="ChapterFailed: empty after 3 attempts"),
    ]
    _, markdown = assemble(_plan(2), drafts, SPEC, source_name="d", generated_at=STAMP)
    assert "> **Generation failed.** ChapterFailed: empty after 3 attempts" in markdown
    assert "## Chapter 2: Part 2" in markdown


def test_assemble_missing_draft_placeholder():
    drafts = [ChapterDraft(1, "Part 1", "good body")]
    _, markdown = assemble(_plan(2), drafts, SPEC, source_name="d", generated_at=STAMP)
    assert "never generated" in markdown


def test_assemble_deterministic_bytes():
    drafts = [ChapterDraft(1, "Part 1", "body")]
    one = assemble(_plan(1), drafts, SPEC, source_name="d", generated_at=STAMP)[1]
    two = assemble(_plan(1), drafts, SPEC, source_name="d", generated_at=STAMP)[1]
    assert one == two


def test_textbook_json_mirror():
    ref = Reference(kind="academic", title="P", locator="papers/p.md", snippet="s",
                    combined_score=0.7, relevance_score=0.91)
    drafts = [ChapterDraft(1, "Part 1", "body", references=[ref])]
    book, _ = assemble(_plan(1), drafts, SPEC, source_name="d.pptx", generated_at=STAMP)
    doc = textbook_to_json(book, _plan(1))
    assert doc["book_title"] == "The Book"
    assert doc["metadata"]["source_name"] == "d.pptx"
    assert doc["chapters"][0]["references"][0]["relevance_score"] == 0.91
    assert doc["bibliography"][0]["title"] == "P"
