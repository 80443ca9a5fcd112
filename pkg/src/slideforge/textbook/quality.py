"""Computable quality checks: keyword coverage and formatting lints."""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass

from ..deck.model import DeckExtract

# small built-in stopword list: common English plus Japanese particles
STOPWORDS = frozenset("""
a an and are as at be but by for from has have if in into is it its of on or
such that the their there these this to was were will with
の に は を た が で て と し れ さ も する から な こと として い や です ます
""".split())

_TOKEN = re.compile(r"[^\W_]+", re.UNICODE)


def _tokens(text: str) -> list[str]:
    return _TOKEN.findall(text.casefold())


def deck_keywords(deck: DeckExtract, top_k: int = 20) -> set[str]:
    """Title words plus the top_k most frequent non-stopword raw_text tokens."""
    keywords: set[str] = set()
    counts: Counter[str] = Counter()
    for slide in deck.slides:
        if slide.title:
            keywords.update(_tokens(slide.title))
        counts.update(t for t in _tokens(slide.raw_text) if t not in STOPWORDS)
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    keywords.update(token for token, _ in ranked[:top_k])
    keywords.discard("")
    return keywords


def keyword_coverage(book_md: str, deck: DeckExtract, top_k: int = 20) -> float:
    """Fraction of deck keywords present in the book (word-boundary, case-folded).

    Boundaries use the same token class as extraction (underscore is a
    separator), so every extracted keyword matches its own source text.
    """
    keywords = deck_keywords(deck, top_k=top_k)
    if not keywords:
        return 1.0
    haystack = book_md.casefold()
    covered = sum(
        1 for kw in keywords
        if re.search(rf"(?<![^\W_]){re.escape(kw)}(?![^\W_])", haystack) is not None
    )
    return covered / len(keywords)


@dataclass
class LintIssue:
    code: str  # HeadingJump | EmptyChapter | ReferencesSection | DanglingCitation
    message: str
    line: int  # 1-based line of the finding (0 when document-wide)


_HEADING = re.compile(r"^(#{1,6})\s+(.*)$")
_CHAPTER_HEADING = re.compile(r"^##\s+Chapter\s+\d+:")
_REFERENCES_HEADING = re.compile(r"^##\s+References\s*$")
_CITATION_TAG = re.compile(r"\[R(\d+)\]")
_BIB_ENTRY = re.compile(r"^\d+\.\s")


def format_lint(book_md: str) -> list[LintIssue]:
    """Formatting consistency checks over an assembled book.

    Flags heading level jumps greater than one, chapter headings with no
    body, a missing or duplicated References section, and citation tags
    with no matching bibliography entry. Fenced code blocks are skipped.
    """
    issues: list[LintIssue] = []
    lines = book_md.split("\n")

    in_fence = False
    headings: list[tuple[int, int, str]] = []  # (line number, level, text)
    fence_mask: list[bool] = []
    for n, line in enumerate(lines, start=1):
        if line.lstrip().startswith("```"):
            in_fence = not in_fence
            fence_mask.append(True)
            continue
        fence_mask.append(in_fence)
        if in_fence:
            continue
        match = _HEADING.match(line)
        if match:
            headings.append((n, len(match.group(1)), match.group(2)))

    prev_level: int | None = None
    for n, level, _text in headings:
        if prev_level is not None and level > prev_level + 1:
            issues.append(LintIssue(
                "HeadingJump",
                f"heading level jumps from {prev_level} to {level}",
                n,
            ))
        prev_level = level

    ref_lines = [
        n for n, line in enumerate(lines, start=1)
        if not fence_mask[n - 1] and _REFERENCES_HEADING.match(line)
    ]
    if len(ref_lines) != 1:
        issues.append(LintIssue(
            "ReferencesSection",
            f"expected exactly one References section, found {len(ref_lines)}",
            ref_lines[0] if ref_lines else 0,
        ))

    # chapter heading must be followed by body content before the next <= level-2 heading
    major = [(n, level) for n, level, _ in headings if level <= 2]
    for n, level, text in headings:
        if not _CHAPTER_HEADING.match(f"{'#' * level} {text}") or level != 2:
            continue
        end = next((m for m, _ in major if m > n), len(lines) + 1)
        span = lines[n: end - 1]
        has_body = any(
            chunk.strip() and not _HEADING.match(chunk)
            for chunk in span
        )
        if not has_body:
            issues.append(LintIssue("EmptyChapter", f"chapter heading {text!r} has no body", n))

    bib_count = 0
    if len(ref_lines) == 1:
        for line in lines[ref_lines[0]:]:
            if _BIB_ENTRY.match(line):
                bib_count += 1
    body_end = ref_lines[0] if ref_lines else len(lines)
    dangling: set[int] = set()
    for n, line in enumerate(lines[:body_end], start=1):
        if fence_mask[n - 1]:
            continue
        for match in _CITATION_TAG.finditer(line):
            tag = int(match.group(1))
            if (tag < 1 or tag > bib_count) and tag not in dangling:
                dangling.add(tag)
                issues.append(LintIssue(
                    "DanglingCitation",
                    f"citation tag [R{tag}] has no bibliography entry (found {bib_count})",
                    n,
                ))
    return issues
