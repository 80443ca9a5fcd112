from .citations import format_citations
from .scoring import (
    LocalHit,
    Reference,
    RetrievalBundle,
    dedup,
    merge_score,
    relevance_score,
    retrieve_bundle,
    search_local,
    search_web,
)
from .web import CustomSearchClient, StubWebSearchClient, TokenBucket, WebHit, WebSearchClient

__all__ = [
    "CustomSearchClient",
    "LocalHit",
    "Reference",
    "RetrievalBundle",
    "StubWebSearchClient",
    "TokenBucket",
    "WebHit",
    "WebSearchClient",
    "dedup",
    "format_citations",
    "merge_score",
    "relevance_score",
    "retrieve_bundle",
    "search_local",
    "search_web",
]
