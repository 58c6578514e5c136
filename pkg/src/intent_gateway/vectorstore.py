"""Exact-scan vector index over unit-norm embeddings.

The index is the knowledge store queried by every pipeline: entries carry the
embedding vector (float32) plus a payload with the original content so that
search can run over summaries while retrieval returns originals.

Ranking contract: top-k by cosine similarity, descending, ties broken by
ascending insertion order; always identical to a brute-force cosine scan.
Cosine against an all-zero vector is defined as 0.

Concurrency: one lock serializes writers; readers operate on immutable
snapshots of the entry list, so in-flight queries are unaffected by upserts.
"""

from __future__ import annotations

import hashlib
import json
import struct
import threading
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from intent_gateway.errors import (
    BadParams,
    CorruptIndex,
    DimensionMismatch,
    EmptyIndex,
    IoError,
)

_MAGIC = b"IGVX"
_FORMAT_VERSION = 1


@dataclass(frozen=True)
class NodePayload:
    original_text: str
    modality: str
    doc_id: str
    summary_text: str | None = None

    def to_dict(self) -> dict:
        return {
            "original_text": self.original_text,
            "summary_text": self.summary_text,
            "modality": self.modality,
            "doc_id": self.doc_id,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "NodePayload":
        return cls(
            original_text=data["original_text"],
            summary_text=data.get("summary_text"),
            modality=data["modality"],
            doc_id=data["doc_id"],
        )


@dataclass(frozen=True)
class EmbeddedNode:
    node_id: str
    vector: np.ndarray
    payload: NodePayload

    def __eq__(self, other):
        if not isinstance(other, EmbeddedNode):
            return NotImplemented
        return (
            self.node_id == other.node_id
            and self.payload == other.payload
            and self.vector.dtype == other.vector.dtype
            and np.array_equal(self.vector, other.vector)
        )

    def __hash__(self):
        return hash(self.node_id)


@dataclass(frozen=True)
class IndexEntry:
    """Pre-embedding item: the text to embed plus the payload to store.

    ``summary`` takes precedence for embedding when present; the payload
    always keeps the original text.
    """

    node_id: str
    text: str
    modality: str
    doc_id: str
    summary: str | None = None

    @property
    def embed_text(self) -> str:
        return self.summary if self.summary is not None else self.text


@dataclass
class VectorIndex:
    dimension: int
    metric: str = "cosine"
    version: int = 0
    _nodes: list[EmbeddedNode] = field(default_factory=list, repr=False)
    _by_id: dict[str, int] = field(default_factory=dict, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False, compare=False)

    def __len__(self) -> int:
        return len(self._nodes)

    @property
    def nodes(self) -> tuple[EmbeddedNode, ...]:
        return tuple(self._nodes)

    def get(self, node_id: str) -> EmbeddedNode | None:
        idx = self._by_id.get(node_id)
        return self._nodes[idx] if idx is not None else None

    def upsert(self, nodes: Iterable[EmbeddedNode]) -> "VectorIndex":
        """Insert or replace nodes; one call bumps the version by one."""
        nodes = list(nodes)
        for node in nodes:
            if node.vector.shape != (self.dimension,):
                raise DimensionMismatch(
                    f"node {node.node_id!r} has dimension {node.vector.shape[0]},"
                    f" index expects {self.dimension}"
                )
        with self._lock:
            fresh = list(self._nodes)
            by_id = dict(self._by_id)
            for node in nodes:
                existing = by_id.get(node.node_id)
                if existing is None:
                    by_id[node.node_id] = len(fresh)
                    fresh.append(node)
                else:
                    fresh[existing] = node
            self._nodes = fresh
            self._by_id = by_id
            self.version += 1
        return self

    def query(self, query_vector: np.ndarray, k: int) -> list[tuple[str, float]]:
        """Top-k ``(node_id, cosine score)``, ranking per the module contract."""
        if k < 1:
            raise BadParams("k must be >= 1")
        snapshot = self._nodes
        if not snapshot:
            raise EmptyIndex("query against an empty index")
        q = np.asarray(query_vector, dtype=np.float64)
        if q.shape != (self.dimension,):
            raise DimensionMismatch(
                f"query has dimension {q.shape[0]}, index expects {self.dimension}"
            )
        # storage is float32; scores are computed row-wise in float64 so that
        # equal vectors always produce bit-equal scores (matrix kernels round
        # differently per row position, which would corrupt tie-breaking)
        qnorm = float(np.linalg.norm(q))
        scores = np.zeros(len(snapshot), dtype=np.float64)
        if qnorm > 0.0:
            for i, node in enumerate(snapshot):
                row = node.vector.astype(np.float64)
                norm = float(np.linalg.norm(row))
                if norm > 0.0:
                    scores[i] = float(np.dot(row, q)) / (norm * qnorm)
        order = np.argsort(-scores, kind="stable")[: min(k, len(snapshot))]
        return [(snapshot[i].node_id, float(scores[i])) for i in order]


def embed_and_index(
    entries: Sequence[IndexEntry],
    embedder,
    index: VectorIndex | None = None,
) -> VectorIndex:
    """Embed entries (summary when present, else original) and upsert them."""
    if index is None:
        index = VectorIndex(dimension=embedder.embedding_dimension)
    vectors = embedder.embed([entry.embed_text for entry in entries])
    nodes = [
        EmbeddedNode(
            node_id=entry.node_id,
            vector=np.asarray(vector, dtype=np.float32),
            payload=NodePayload(
                original_text=entry.text,
                summary_text=entry.summary,
                modality=entry.modality,
                doc_id=entry.doc_id,
            ),
        )
        for entry, vector in zip(entries, vectors)
    ]
    index.upsert(nodes)
    return index


def _encode_entry(node: EmbeddedNode) -> bytes:
    node_id = node.node_id.encode("utf-8")
    payload = json.dumps(node.payload.to_dict(), ensure_ascii=False).encode("utf-8")
    vector = node.vector.astype("<f4").tobytes()
    return b"".join(
        [struct.pack("<I", len(node_id)), node_id, vector, struct.pack("<I", len(payload)), payload]
    )


def persist(index: VectorIndex, path) -> None:
    """Write the index: header (magic, versions, dim, count, sha256) + body."""
    body = b"".join(_encode_entry(node) for node in index.nodes)
    header = _MAGIC + struct.pack(
        "<III I", _FORMAT_VERSION, index.version, index.dimension, len(index)
    )
    digest = hashlib.sha256(body).digest()
    try:
        with open(path, "wb") as fh:
            fh.write(header)
            fh.write(digest)
            fh.write(body)
    except OSError as exc:
        raise IoError(f"cannot write index to {path}: {exc}") from exc


def load(path) -> VectorIndex:
    """Read an index written by :func:`persist`; verifies the checksum."""
    try:
        with open(path, "rb") as fh:
            blob = fh.read()
    except OSError as exc:
        raise IoError(f"cannot read index from {path}: {exc}") from exc

    header_size = len(_MAGIC) + 16 + 32
    if len(blob) < header_size or blob[: len(_MAGIC)] != _MAGIC:
        raise CorruptIndex(f"{path} is not an index file")
    fmt, index_version, dimension, count = struct.unpack_from("<III I", blob, len(_MAGIC))
    if fmt != _FORMAT_VERSION:
        raise CorruptIndex(f"unsupported index format version {fmt}")
    digest = blob[len(_MAGIC) + 16 : header_size]
    body = blob[header_size:]
    if hashlib.sha256(body).digest() != digest:
        raise CorruptIndex(f"{path} failed checksum validation")

    nodes = []
    offset = 0
    vector_bytes = dimension * 4
    try:
        for _ in range(count):
            (id_len,) = struct.unpack_from("<I", body, offset)
            offset += 4
            node_id = body[offset : offset + id_len].decode("utf-8")
            offset += id_len
            vector = np.frombuffer(body[offset : offset + vector_bytes], dtype="<f4").copy()
            if vector.shape != (dimension,):
                raise CorruptIndex(f"{path} truncated inside a vector")
            offset += vector_bytes
            (payload_len,) = struct.unpack_from("<I", body, offset)
            offset += 4
            payload = NodePayload.from_dict(
                json.loads(body[offset : offset + payload_len].decode("utf-8"))
            )
            offset += payload_len
            nodes.append(EmbeddedNode(node_id=node_id, vector=vector, payload=payload))
    except (struct.error, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CorruptIndex(f"{path} is structurally invalid: {exc}") from exc
    if offset != len(body):
        raise CorruptIndex(f"{path} carries {len(body) - offset} trailing bytes")

    index = VectorIndex(dimension=dimension)
    if nodes:
        index.upsert(nodes)
    index.version = index_version
    return index
