"""Exact flat L2 vector index with binary on-disk persistence."""

from __future__ import annotations

import json
import struct
import threading
import zlib
from pathlib import Path

import numpy as np

from ..errors import ChecksumMismatch, DimMismatch, DuplicateId, FormatVersionMismatch, IoFailure
from .splitter import Chunk

MAGIC = b"SFIX"
FORMAT_VERSION = 1
_HEADER = struct.Struct("<4sHII")  # magic, version, dim, count


class _RWLock:
    """Many readers or one writer."""

    def __init__(self):
        self._cond = threading.Condition()
        self._readers = 0
        self._writing = False

    def acquire_read(self):
        with self._cond:
            while self._writing:
                self._cond.wait()
            self._readers += 1

    def release_read(self):
        with self._cond:
            self._readers -= 1
            if self._readers == 0:
                self._cond.notify_all()

    def acquire_write(self):
        with self._cond:
            while self._writing or self._readers:
                self._cond.wait()
            self._writing = True

    def release_write(self):
        with self._cond:
            self._writing = False
            self._cond.notify_all()


class VectorIndex:
    """Exhaustive squared-L2 scan over a flat float32 matrix.

    Rows keep insertion order; every row has an id and a metadata record
    {doc_id, text, origin, title}.
    """

    def __init__(self, dim: int):
        if dim < 1:
            raise ValueError("dim must be >= 1")
        self.dim = dim
        self.ids: list[str] = []
        self.metadata: dict[str, dict] = {}
        self._rows: list[np.ndarray] = []
        self._matrix: np.ndarray | None = None  # rebuilt lazily after adds
        self._lock = _RWLock()

    def __len__(self) -> int:
        return len(self.ids)

    def add(self, chunk: Chunk, vector: np.ndarray, origin: str = "", title: str = "") -> None:
        vec = np.asarray(vector, dtype=np.float32)
        if vec.ndim != 1 or vec.shape[0] != self.dim:
            raise DimMismatch(f"vector has dim {vec.shape}, index has dim {self.dim}")
        self._lock.acquire_write()
        try:
            if chunk.id in self.metadata:
                raise DuplicateId(chunk.id)
            self.ids.append(chunk.id)
            self._rows.append(vec.copy())
            self._matrix = None
            self.metadata[chunk.id] = {
                "doc_id": chunk.doc_id,
                "text": chunk.text,
                "origin": origin,
                "title": title,
            }
        finally:
            self._lock.release_write()

    def search(self, query: np.ndarray, k: int) -> list[tuple[str, float]]:
        """Return min(k, n) (chunk_id, squared L2) pairs, ascending distance.

        Exhaustive exact scan; ties keep insertion order.
        """
        if k < 1:
            raise ValueError("k must be >= 1")
        q = np.asarray(query, dtype=np.float32)
        if q.ndim != 1 or q.shape[0] != self.dim:
            raise DimMismatch(f"query has dim {q.shape}, index has dim {self.dim}")
        self._lock.acquire_read()
        try:
            if not self.ids:
                return []
            matrix = self._materialize()
            diff = matrix - q
            dists = np.einsum("ij,ij->i", diff, diff)
            order = np.argsort(dists, kind="stable")[: min(k, len(self.ids))]
            return [(self.ids[int(i)], float(dists[int(i)])) for i in order]
        finally:
            self._lock.release_read()

    def _materialize(self) -> np.ndarray:
        if self._matrix is None or len(self._matrix) != len(self._rows):
            self._matrix = (
                np.vstack(self._rows) if self._rows else np.empty((0, self.dim), np.float32)
            )
        return self._matrix

    # --- persistence: SFIX v1 ---
    # magic "SFIX" | u16 version | u32 dim | u32 count | count*dim float32 LE
    # | u32 metadata length | metadata JSON UTF-8 | u32 CRC32 of all prior bytes

    def save(self, path: str | Path) -> None:
        self._lock.acquire_read()
        try:
            matrix = self._materialize()
            meta_json = json.dumps(
                {"ids": self.ids, "metadata": self.metadata}, ensure_ascii=False
            ).encode("utf-8")
            body = _HEADER.pack(MAGIC, FORMAT_VERSION, self.dim, len(self.ids))
            body += matrix.astype("<f4").tobytes(order="C")
            body += struct.pack("<I", len(meta_json)) + meta_json
            body += struct.pack("<I", zlib.crc32(body) & 0xFFFFFFFF)
        finally:
            self._lock.release_read()
        try:
            Path(path).write_bytes(body)
        except OSError as exc:
            raise IoFailure(f"cannot write index to {path}: {exc}") from exc

    @classmethod
    def load(cls, path: str | Path) -> "VectorIndex":
        try:
            data = Path(path).read_bytes()
        except OSError as exc:
            raise IoFailure(f"cannot read index from {path}: {exc}") from exc
        if len(data) >= 4 and data[:4] != MAGIC:
            raise FormatVersionMismatch("not an index file (bad magic)")
        if len(data) < _HEADER.size + 8:
            raise ChecksumMismatch("index file truncated")
        magic, version, dim, count = _HEADER.unpack_from(data, 0)
        if version != FORMAT_VERSION:
            raise FormatVersionMismatch(f"unsupported index format version {version}")
        offset = _HEADER.size
        vec_bytes = count * dim * 4
        if len(data) < offset + vec_bytes + 4:
            raise ChecksumMismatch("index file truncated")
        (meta_len,) = struct.unpack_from("<I", data, offset + vec_bytes)
        expected = offset + vec_bytes + 4 + meta_len + 4
        if len(data) != expected:
            raise ChecksumMismatch(
                f"index file has {len(data)} bytes, layout requires {expected}"
            )
        (stored_crc,) = struct.unpack_from("<I", data, expected - 4)
        if zlib.crc32(data[: expected - 4]) & 0xFFFFFFFF != stored_crc:
            raise ChecksumMismatch("index file failed CRC verification")

        meta = json.loads(data[offset + vec_bytes + 4: expected - 4].decode("utf-8"))
        index = cls(dim)
        index.ids = list(meta["ids"])
        index.metadata = dict(meta["metadata"])
        matrix = np.frombuffer(data, dtype="<f4", count=count * dim, offset=offset)
        matrix = matrix.reshape(count, dim).copy()
        index._rows = [matrix[i] for i in range(count)]
        index._matrix = matrix
        return index
