"""Markdown bibliography rendering."""

from __future__ import annotations

from decimal import ROUND_DOWN, Decimal

from .scoring import Reference

HEADER = "## References"


def _trunc2(value: float) -> str:
    """Two decimals, truncated toward zero (0.876 -> '0.87')."""
    return str(Decimal(str(value)).quantize(Decimal("0.01"), rounding=ROUND_DOWN))


def format_citations(refs: list[Reference]) -> str:
    """Deterministic numbered reference list.

    Academic entries: title, origin, and a truncated two-decimal
    relevance figure when one was computed. Web entries: linked title,
    snippet line, then the bare URL on its own line.
    """
    if not refs:
        return f"{HEADER}\n\n_None._"
    lines = [HEADER, ""]
    for i, ref in enumerate(refs, start=1):
        if ref.kind == "academic":
            entry = f"{i}. **{ref.title}**"
            if ref.locator:
                entry += f" - {ref.locator}"
            if ref.relevance_score is not None:
                entry += f" (relevance: {_trunc2(ref.relevance_score)})"
            lines.append(entry)
        else:
            lines.append(f"{i}. [{ref.title}]({ref.locator})")
            if ref.snippet:
                lines.append(f"   {ref.snippet}")
            lines.append(f"   {ref.locator}")
    return "\n".join(lines)
