"""Overlapping character chunks cut at natural text boundaries."""

from __future__ import annotations

from dataclasses import dataclass

SEPARATORS = ["\n\n", "\n", ". ", "。", "! ", "? ", " ", ""]


@dataclass
class Chunk:
    id: str
    doc_id: str
    seq: int
    text: str
    char_span: tuple[int, int]
    overlap_len: int = 0


def split_text(
    text: str,
    chunk_size: int = 200,
    overlap: int = 40,
    doc_id: str = "",
    separators: list[str] | None = None,
) -> list[Chunk]:
    """Split text into chunks of at most chunk_size characters.

    Separators are tried coarsest-first and the first one present wins;
    the separator stays attached to the piece it ends. Oversized pieces
    recurse with the remaining separators, with a bare character cut as
    the last resort. Adjacent pieces merge greedily up to the per-chunk
    content budget (chunk_size - overlap), so that after every chunk but
    the first is prefixed with the trailing `overlap` characters of the
    text preceding it, all chunks stay within chunk_size. Whitespace-only
    chunks are dropped. Each chunk's text is the verbatim slice
    text[start:end] of its char_span.
    """
    if not 0 <= overlap < chunk_size:
        raise ValueError(f"need 0 <= overlap < chunk_size, got {overlap}/{chunk_size}")
    seps = SEPARATORS if separators is None else separators
    if not text:
        return []

    def make(seq: int, start: int, end: int, overlap_len: int) -> Chunk:
        ident = f"{doc_id}:{seq:04d}" if doc_id else f"c{seq:04d}"
        return Chunk(ident, doc_id, seq, text[start:end], (start, end), overlap_len)

    if len(text) <= chunk_size:
        return [] if not text.strip() else [make(0, 0, len(text), 0)]

    cap = chunk_size - overlap
    pieces = _cut(text, 0, len(text), seps, cap)

    bases: list[tuple[int, int]] = []
    for lo, hi in pieces:
        if bases and hi - bases[-1][0] <= cap:
            bases[-1] = (bases[-1][0], hi)
        else:
            bases.append((lo, hi))

    chunks: list[Chunk] = []
    for lo, hi in bases:
        if not text[lo:hi].strip():
            continue
        if not chunks:
            chunks.append(make(0, lo, hi, 0))
        else:
            # clamp so starts stay non-decreasing across dropped whitespace
            start = max(0, lo - overlap, chunks[-1].char_span[0])
            chunks.append(make(len(chunks), start, hi, lo - start))
    return chunks


def _cut(text: str, lo: int, hi: int, seps: list[str], cap: int) -> list[tuple[int, int]]:
    """Cut text[lo:hi] into contiguous pieces of at most cap characters."""
    out: list[tuple[int, int]] = []
    # (lo, hi, separator list) segments still to process, front first
    stack: list[tuple[int, int, list[str]]] = [(lo, hi, seps)]
    while stack:
        s_lo, s_hi, s_seps = stack.pop(0)
        if s_hi - s_lo <= cap:
            if s_hi > s_lo:
                out.append((s_lo, s_hi))
            continue
        sep = next((s for s in s_seps if s == "" or text.find(s, s_lo, s_hi) != -1), "")
        if sep == "":
            out.extend((j, min(j + cap, s_hi)) for j in range(s_lo, s_hi, cap))
            continue
        rest = s_seps[s_seps.index(sep) + 1:]
        segments: list[tuple[int, int, list[str]]] = []
        cur = s_lo
        while cur < s_hi:
            j = text.find(sep, cur, s_hi)
            end = s_hi if j == -1 else j + len(sep)
            segments.append((cur, end, rest))
            cur = end
        stack[:0] = segments
    return out
