"""Hybrid retrieval: local hits, web hits, weighted merge, dedup, relevance."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from ..errors import QuotaExceeded, SlideforgeError, TransportFailure
from ..kb.embeddings import EmbeddingClient
from ..kb.index import VectorIndex
from .web import WebHit, WebSearchClient

logger = logging.getLogger("slideforge.retrieval")

DEFAULT_LOCAL_WEIGHT = 0.7
DEFAULT_WEB_WEIGHT = 0.3
DEFAULT_DEDUP_THRESHOLD = 0.95


@dataclass
class LocalHit:
    chunk_id: str
    l2_squared: float
    similarity: float  # 1 / (1 + squared L2), in (0, 1]
    text: str = ""
    origin: str = ""
    title: str = ""
    doc_id: str = ""


@dataclass
class Reference:
    kind: str  # "academic" | "web"
    title: str
    locator: str  # doc origin or URL
    snippet: str
    combined_score: float
    relevance_score: float | None = None


@dataclass
class RetrievalBundle:
    query: str
    references: list[Reference] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)


def search_local(kb: VectorIndex | None, embed: EmbeddingClient, query: str, k: int = 5) -> list[LocalHit]:
    """Embed the query and rank index chunks by similarity = 1/(1 + d^2)."""
    if kb is None or len(kb) == 0:
        return []
    vector = embed.embed(query)
    hits = []
    for chunk_id, dist in kb.search(vector, k):
        meta = kb.metadata.get(chunk_id, {})
        hits.append(LocalHit(
            chunk_id=chunk_id,
            l2_squared=dist,
            similarity=1.0 / (1.0 + dist),
            text=meta.get("text", ""),
            origin=meta.get("origin", ""),
            title=meta.get("title", ""),
            doc_id=meta.get("doc_id", ""),
        ))
    return hits


def search_web(client: WebSearchClient, query: str, n: int = 5) -> list[WebHit]:
    """Thin pass-through kept for symmetry; errors propagate to the caller."""
    return client.search(query, n)


def merge_score(
    local: list[LocalHit],
    web: list[WebHit],
    w_local: float = DEFAULT_LOCAL_WEIGHT,
    w_web: float = DEFAULT_WEB_WEIGHT,
) -> list[Reference]:
    """Weighted merge: academic score = w_local * similarity, web = w_web / rank.

    Descending combined score; ties put academic before web, then keep
    input order.
    """
    if w_local < 0 or w_web < 0 or w_local + w_web <= 0:
        raise ValueError("weights must be non-negative with a positive sum")
    candidates: list[tuple[float, int, int, Reference]] = []
    for i, hit in enumerate(local):
        ref = Reference(
            kind="academic",
            title=hit.title or hit.doc_id or hit.chunk_id,
            locator=hit.origin,
            snippet=hit.text,
            combined_score=w_local * hit.similarity,
        )
        candidates.append((-ref.combined_score, 0, i, ref))
    for i, hit in enumerate(web):
        ref = Reference(
            kind="web",
            title=hit.title,
            locator=hit.url,
            snippet=hit.snippet,
            combined_score=w_web * (1.0 / hit.rank),
        )
        candidates.append((-ref.combined_score, 1, i, ref))
    candidates.sort(key=lambda item: item[:3])
    return [ref for _, _, _, ref in candidates]


def _cosine(u: np.ndarray, v: np.ndarray) -> float:
    u = u.astype(np.float64)
    v = v.astype(np.float64)
    nu = float(np.linalg.norm(u))
    nv = float(np.linalg.norm(v))
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return float(np.dot(u, v) / (nu * nv))


def dedup(
    refs: list[Reference],
    embed: EmbeddingClient | None,
    sim_threshold: float = DEFAULT_DEDUP_THRESHOLD,
) -> list[Reference]:
    """Drop duplicates, keeping the higher-scored (earlier) member.

    Exact locator matches go first; then snippet-embedding cosine at or
    above sim_threshold counts as a duplicate. Embedding failures degrade
    to exact-match dedup with a warning. Input order is preserved.
    """
    survivors: list[Reference] = []
    seen_locators: set[str] = set()
    exact_only = embed is None
    vectors: list[np.ndarray] = []
    for ref in refs:
        if ref.locator and ref.locator in seen_locators:
            continue
        vec = None
        if not exact_only and ref.snippet:
            try:
                vec = embed.embed(ref.snippet)
            except SlideforgeError as exc:
                logger.warning("dedup degrading to exact matching: %s", exc)
                exact_only = True
        if vec is not None and any(
            v is not None and _cosine(vec, v) >= sim_threshold for v in vectors
        ):
            continue
        survivors.append(ref)
        vectors.append(vec)
        if ref.locator:
            seen_locators.add(ref.locator)
    return survivors


def relevance_score(
    ref: Reference,
    chapter_text: str,
    embed: EmbeddingClient,
) -> float | None:
    """Semantic alignment in [0, 1]: (cosine(snippet, chapter) + 1) / 2.

    Returns None (score absent) when embedding fails; the citation is
    then rendered without a relevance figure.
    """
    if not ref.snippet or not chapter_text:
        raise ValueError("relevance_score needs a non-empty snippet and chapter text")
    try:
        snippet_vec, chapter_vec = embed.embed_batch([ref.snippet, chapter_text])
    except SlideforgeError as exc:
        logger.warning("relevance scoring failed for %r: %s", ref.title, exc)
        ref.relevance_score = None
        return None
    score = (_cosine(snippet_vec, chapter_vec) + 1.0) / 2.0
    score = min(1.0, max(0.0, score))
    ref.relevance_score = score
    return score


def retrieve_bundle(
    query: str,
    kb: VectorIndex | None,
    embed: EmbeddingClient,
    web_client: WebSearchClient | None,
    k_local: int = 5,
    n_web: int = 5,
    w_local: float = DEFAULT_LOCAL_WEIGHT,
    w_web: float = DEFAULT_WEB_WEIGHT,
    sim_threshold: float = DEFAULT_DEDUP_THRESHOLD,
) -> RetrievalBundle:
    """Per-chapter retrieval with degraded-mode web failures."""
    local = search_local(kb, embed, query, k=k_local)
    web: list[WebHit] = []
    warnings: list[str] = []
    if web_client is not None:
        try:
            web = search_web(web_client, query, n=n_web)
        except (QuotaExceeded, TransportFailure) as exc:
            message = f"web search degraded, using local hits only: {exc}"
            logger.warning(message)
            warnings.append(message)
    refs = dedup(merge_score(local, web, w_local=w_local, w_web=w_web), embed, sim_threshold)
    return RetrievalBundle(query=query, references=refs, warnings=warnings)
