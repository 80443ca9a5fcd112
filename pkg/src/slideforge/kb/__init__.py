from .embeddings import CachingEmbeddingClient, EmbeddingClient, HashEmbeddingClient, RemoteEmbeddingClient
from .index import VectorIndex
from .ingest import SourceDoc, ingest_document
from .splitter import SEPARATORS, Chunk, split_text

__all__ = [
    "CachingEmbeddingClient",
    "Chunk",
    "EmbeddingClient",
    "HashEmbeddingClient",
    "RemoteEmbeddingClient",
    "SEPARATORS",
    "SourceDoc",
    "VectorIndex",
    "ingest_document",
    "split_text",
]
