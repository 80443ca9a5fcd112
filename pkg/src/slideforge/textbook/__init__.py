from .customization import DIFFICULTIES, STYLES, CustomizationSpec
from .generate import ChapterDraft, Textbook, assemble, generate_chapter, textbook_to_json
from .llm import (
    ECHO_MODEL_ID,
    EchoLlmClient,
    HttpChatClient,
    LlmClient,
    LlmRouter,
    ModelEndpoint,
    ScriptedLlmClient,
)
from .planner import BookPlan, ChapterPlan, plan_structure, validate_plan
from .prompts import build_chapter_prompt
from .quality import LintIssue, deck_keywords, format_lint, keyword_coverage

__all__ = [
    "BookPlan",
    "ChapterDraft",
    "ChapterPlan",
    "CustomizationSpec",
    "DIFFICULTIES",
    "ECHO_MODEL_ID",
    "EchoLlmClient",
    "HttpChatClient",
    "LintIssue",
    "LlmClient",
    "LlmRouter",
    "ModelEndpoint",
    "STYLES",
    "ScriptedLlmClient",
    "Textbook",
    "assemble",
    "build_chapter_prompt",
    "deck_keywords",
    "format_lint",
    "generate_chapter",
    "keyword_coverage",
    "plan_structure",
    "textbook_to_json",
    "validate_plan",
]
