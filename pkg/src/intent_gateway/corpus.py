"""Build the network knowledge base from technical documents.

Ingestion stages:
1. ``load_document`` partitions a document into modality chunks (text, table,
   image); every character belongs to exactly one chunk.
2. ``split_text`` windows text chunks into overlapping token nodes
   (defaults: 128 tokens, overlap 10).
3. ``summarize_chunk`` produces a summary per text/table chunk via the
   summarization model.
4. ``ingest_documents`` embeds the summaries (payloads keep the originals)
   and upserts everything into a :class:`~intent_gateway.vectorstore.VectorIndex`.

Image chunks are recorded with a reference string but never summarized or
embedded; there is no vision model in the loop.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from pathlib import Path

from intent_gateway import prompts, textutil
from intent_gateway.errors import BadParams, EmptyDocument, UnsupportedModality
from intent_gateway.gateway import ModelGateway
from intent_gateway.vectorstore import IndexEntry, VectorIndex, embed_and_index

logger = logging.getLogger(__name__)

FORMAT_HINTS = ("plain", "markdown-like", "pre-segmented")

DEFAULT_MAX_TOKENS = 128
DEFAULT_OVERLAP = 10

_IMAGE_LINE_RE = re.compile(r"^\s*!\[[^\]]*\]\([^)]*\)\s*$")


@dataclass(frozen=True)
class RawDocument:
    id: str
    text: str
    source_uri: str = ""
    format_hint: str = "plain"


@dataclass(frozen=True)
class ModalityChunk:
    id: str
    doc_id: str
    modality: str  # text | table | image
    content: str
    order_index: int


@dataclass(frozen=True)
class Summary:
    chunk_id: str
    title: str
    body: str


@dataclass(frozen=True)
class TextNode:
    id: str
    parent_chunk_id: str
    text: str
    token_start: int
    token_end: int


def load_document(doc: RawDocument) -> list[ModalityChunk]:
    """Partition a document into modality chunks, in document order.

    A table is a maximal run of >= 2 consecutive lines bearing the grid
    separator (``|`` or tab); for the markdown-like hint, a reference-only
    image line becomes an image chunk. Everything else is text. The
    pre-segmented hint additionally honors the document's own segmentation:
    a blank line ends the current text chunk. Chunk contents are verbatim
    slices, so concatenating them in order restores the document exactly.
    """
    if not doc.text.strip():
        raise EmptyDocument(f"document {doc.id!r} has no content")
    if doc.format_hint not in FORMAT_HINTS:
        raise BadParams(f"unknown format hint {doc.format_hint!r}")

    lines = doc.text.splitlines(keepends=True)
    detect_images = doc.format_hint == "markdown-like"

    def classify(line: str) -> str:
        if detect_images and _IMAGE_LINE_RE.match(line):
            return "image"
        if textutil.is_grid_line(line):
            return "grid"
        return "text"

    labels = [classify(line) for line in lines]
    # a lone grid line is not a table
    for i, label in enumerate(labels):
        if label != "grid":
            continue
        prev_grid = i > 0 and labels[i - 1] == "grid"
        next_grid = i + 1 < len(labels) and labels[i + 1] == "grid"
        if not prev_grid and not next_grid:
            labels[i] = "text"

    honor_blank_breaks = doc.format_hint == "pre-segmented"

    chunks: list[ModalityChunk] = []
    run_label: str | None = None
    run_lines: list[str] = []

    def flush():
        nonlocal run_lines
        if not run_lines:
            return
        modality = {"grid": "table", "image": "image", "text": "text"}[run_label]
        chunks.append(
            ModalityChunk(
                id=f"{doc.id}:{len(chunks)}",
                doc_id=doc.id,
                modality=modality,
                content="".join(run_lines),
                order_index=len(chunks),
            )
        )
        run_lines = []

    for line, label in zip(lines, labels):
        segment_break = (
            honor_blank_breaks
            and label == "text"
            and run_label == "text"
            and run_lines
            and not run_lines[-1].strip()
            and line.strip()
        )
        if label != run_label or segment_break:
            flush()
            run_label = label
        run_lines.append(line)
    flush()
    return chunks


def split_text(
    chunk: ModalityChunk,
    max_tokens: int = DEFAULT_MAX_TOKENS,
    overlap: int = DEFAULT_OVERLAP,
) -> list[TextNode]:
    """Window a text chunk into token nodes with the given size and overlap.

    Node k covers tokens ``[k*stride, k*stride + max_tokens)`` clipped to the
    chunk, with ``stride = max_tokens - overlap``; generation stops once a
    node reaches the final token.
    """
    if chunk.modality != "text":
        raise UnsupportedModality(f"split_text expects a text chunk, got {chunk.modality}")
    if max_tokens <= 0 or overlap < 0 or overlap >= max_tokens:
        raise BadParams(f"invalid window: max_tokens={max_tokens} overlap={overlap}")

    words = textutil.tokens(chunk.content)
    total = len(words)
    if total == 0:
        return []

    stride = max_tokens - overlap
    nodes = []
    start = 0
    while True:
        end = min(start + max_tokens, total)
        nodes.append(
            TextNode(
                id=f"{chunk.id}:n{len(nodes)}",
                parent_chunk_id=chunk.id,
                text=" ".join(words[start:end]),
                token_start=start,
                token_end=end,
            )
        )
        if end >= total:
            break
        start += stride
    return nodes


def summarize_chunk(chunk: ModalityChunk, chat: ModelGateway) -> Summary:
    """Summarize a text or table chunk with the summarization model.

    The reply's leading ``Title:`` line, when present, becomes the summary
    title; the remainder is the body.
    """
    if chunk.modality == "text":
        prompt = prompts.text_summary_prompt(chunk.content)
    elif chunk.modality == "table":
        prompt = prompts.table_summary_prompt(chunk.content)
    else:
        raise UnsupportedModality(f"cannot summarize modality {chunk.modality!r}")

    reply = chat.chat("summarization", prompt).text
    title = ""
    body = reply.strip()
    first, _, rest = body.partition("\n")
    if first.lower().startswith("title:"):
        title = first[len("title:") :].strip()
        body = rest.strip()
    return Summary(chunk_id=chunk.id, title=title, body=body)


def ingest_documents(
    docs: list[RawDocument],
    gateway: ModelGateway,
    index: VectorIndex | None = None,
    max_tokens: int = DEFAULT_MAX_TOKENS,
    overlap: int = DEFAULT_OVERLAP,
) -> VectorIndex:
    """Run the full ingestion pipeline and return the updated index.

    Tables are indexed as single entries; text chunks are split into nodes
    that share their chunk's summary. Search runs over summary embeddings
    while payloads keep the original content. Whitespace-only text chunks
    and image chunks contribute no entries.
    """
    entries: list[IndexEntry] = []
    for doc in docs:
        for chunk in load_document(doc):
            if chunk.modality == "image":
                logger.info("recorded image chunk %s (not indexed)", chunk.id)
                continue
            if chunk.modality == "table":
                summary = summarize_chunk(chunk, gateway)
                entries.append(
                    IndexEntry(
                        node_id=chunk.id,
                        text=chunk.content,
                        modality="table",
                        doc_id=doc.id,
                        summary=summary.body,
                    )
                )
                continue
            nodes = split_text(chunk, max_tokens=max_tokens, overlap=overlap)
            if not nodes:
                continue
            summary = summarize_chunk(chunk, gateway)
            for node in nodes:
                entries.append(
                    IndexEntry(
                        node_id=node.id,
                        text=node.text,
                        modality="text",
                        doc_id=doc.id,
                        summary=summary.body,
                    )
                )
    index = embed_and_index(entries, gateway, index)
    logger.info("ingested %d documents into %d index entries", len(docs), len(entries))
    return index


def read_manifest(manifest_path) -> list[RawDocument]:
    """Load documents named by a manifest: one ``path[,format_hint]`` per line."""
    manifest_path = Path(manifest_path)
    docs = []
    for raw_line in manifest_path.read_text(encoding="utf-8").splitlines():
        line = raw_line.strip()
        if not line or line.startswith("#"):
            continue
        path_part, hint = line, "plain"
        if "," in line:
            candidate_path, candidate_hint = line.rsplit(",", 1)
            if candidate_hint.strip() in FORMAT_HINTS:
                path_part, hint = candidate_path.strip(), candidate_hint.strip()
        source = Path(path_part)
        if not source.is_absolute():
            source = manifest_path.parent / source
        docs.append(
            RawDocument(
                id=source.stem,
                text=source.read_text(encoding="utf-8"),
                source_uri=str(source),
                format_hint=hint,
            )
        )
    return docs
