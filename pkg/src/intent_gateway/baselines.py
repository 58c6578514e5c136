"""Vanilla-RAG and no-RAG comparison pipelines.

Both share the generation prompt and parser with the main pipeline so the
comparison stays fair: vanilla-RAG skips refinement, reranking, and
modality-aware ingestion (plain sentence windows instead); no-RAG skips
retrieval entirely and degrades to a free-text answer when its output does
not parse.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass

from intent_gateway import textutil
from intent_gateway.corpus import RawDocument
from intent_gateway.errors import EmptyDocument, IntentGatewayError, SchemaViolation
from intent_gateway.gateway import ModelGateway
from intent_gateway.intents import FreeTextAnswer, StructuredNetworkIntent, validate
from intent_gateway.refinement import IntentText
from intent_gateway.structuring import (
    RetrievedContext,
    TranslationOutcome,
    generate_structured_intent,
)
from intent_gateway.vectorstore import IndexEntry, VectorIndex, embed_and_index

logger = logging.getLogger(__name__)

DEFAULT_WINDOW = 3
VANILLA_TOP_K = 3


@dataclass(frozen=True)
class WindowNode:
    id: str
    doc_id: str
    sentence_index: int
    center_sentence: str
    window_text: str


def sentence_windows(doc: RawDocument, window: int = DEFAULT_WINDOW) -> list[WindowNode]:
    """One node per sentence; the window spans up to *window* sentences on
    each side, clipped at the document bounds."""
    if not doc.text.strip():
        raise EmptyDocument(f"document {doc.id!r} has no content")
    spans = textutil.sentence_spans(doc.text)
    nodes = []
    for i, (start, end) in enumerate(spans):
        lo = spans[max(0, i - window)][0]
        hi = spans[min(len(spans) - 1, i + window)][1]
        nodes.append(
            WindowNode(
                id=f"{doc.id}:s{i}",
                doc_id=doc.id,
                sentence_index=i,
                center_sentence=doc.text[start:end].strip(),
                window_text=doc.text[lo:hi],
            )
        )
    return nodes


def vanilla_ingest(
    docs: list[RawDocument],
    embedder: ModelGateway,
    window: int = DEFAULT_WINDOW,
) -> VectorIndex:
    """Sentence-window ingestion: no modality separation, no summarization.

    The center sentence is the search representation (it gets embedded);
    the surrounding window is the retrievable payload.
    """
    entries = []
    for doc in docs:
        for node in sentence_windows(doc, window=window):
            entries.append(
                IndexEntry(
                    node_id=node.id,
                    text=node.window_text,
                    modality="text",
                    doc_id=node.doc_id,
                    summary=node.center_sentence,
                )
            )
    return embed_and_index(entries, embedder)


def vanilla_translate(
    intent: IntentText,
    index: VectorIndex,
    chat: ModelGateway,
    top_k: int = VANILLA_TOP_K,
) -> TranslationOutcome:
    """Single-stage baseline: embed the raw intent, retrieve top-3 windows,
    generate with the shared prompt and parser."""
    started = time.perf_counter()
    contexts: list[RetrievedContext] = []
    try:
        vector = chat.embed_one(intent.text)
        hits = index.query(vector, k=top_k)
        contexts = [
            RetrievedContext(
                node_id=node_id,
                text=index.get(node_id).payload.original_text,
                score=score,
                rank=rank,
            )
            for rank, (node_id, score) in enumerate(hits, start=1)
        ]
        structured = generate_structured_intent(contexts, intent.text, chat)
    except IntentGatewayError as exc:
        exc.contexts = tuple(contexts)
        raise
    return TranslationOutcome(
        pipeline="vanilla_rag",
        intent_text=intent.text,
        answer=structured,
        report=validate(structured),
        contexts=tuple(contexts),
        duration_seconds=time.perf_counter() - started,
    )


def norag_translate(intent: IntentText, chat: ModelGateway) -> TranslationOutcome:
    """Prompt-only baseline; unparseable output becomes a FreeTextAnswer."""
    started = time.perf_counter()
    answer: StructuredNetworkIntent | FreeTextAnswer
    try:
        answer = generate_structured_intent(None, intent.text, chat)
        report = validate(answer)
    except SchemaViolation as exc:
        raw = exc.raw_output or ""
        logger.info("no-RAG output did not parse (%s); keeping free text", exc)
        answer = FreeTextAnswer(text=raw)
        report = None
    return TranslationOutcome(
        pipeline="no_rag",
        intent_text=intent.text,
        answer=answer,
        report=report,
        contexts=(),
        duration_seconds=time.perf_counter() - started,
    )
