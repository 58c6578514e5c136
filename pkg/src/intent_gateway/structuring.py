"""Create structured network intents: retrieve, rerank, generate, validate.

``translate`` composes the full pipeline: refine the intent against the
catalog, retrieve the top-k contexts for the well-defined scenario, rerank
them, prompt the instruction model, parse its output, and attach the
validation report. Stage errors propagate unchanged but carry the contexts
and raw output produced so far, so the evaluation harness can still score
the retrieval part of a failed translation.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass

from intent_gateway import prompts
from intent_gateway.errors import BadParams, IntentGatewayError
from intent_gateway.gateway import ModelGateway
from intent_gateway.intents import (
    FreeTextAnswer,
    StructuredNetworkIntent,
    ValidationReport,
    parse_structured_intent,
    validate,
)
from intent_gateway.refinement import (
    CatalogCache,
    IntentText,
    ScenarioCatalog,
    WellDefinedIntent,
    refine,
)
from intent_gateway.textutil import token_set
from intent_gateway.vectorstore import VectorIndex

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RetrievedContext:
    node_id: str
    text: str
    score: float
    rank: int


@dataclass(frozen=True)
class PipelineConfig:
    """Tunable pipeline parameters (retrieval depth, reranking, scorers)."""

    retrieve_k: int = 6
    rerank_top: int = 3
    reranker: str = "lexical"  # lexical | model
    refinement_kind: str = "reasoning"
    generation_kind: str = "instruction"

    def __post_init__(self):
        if not 1 <= self.rerank_top <= self.retrieve_k:
            raise BadParams(
                f"need 1 <= rerank_top <= retrieve_k, got {self.rerank_top}/{self.retrieve_k}"
            )


@dataclass(frozen=True)
class TranslationOutcome:
    """Everything one pipeline run produced, for callers and for evaluation."""

    pipeline: str
    intent_text: str
    answer: StructuredNetworkIntent | FreeTextAnswer
    report: ValidationReport | None
    contexts: tuple[RetrievedContext, ...]
    duration_seconds: float

    @property
    def intent(self) -> StructuredNetworkIntent:
        if not isinstance(self.answer, StructuredNetworkIntent):
            raise BadParams("outcome carries a free-text answer, not a structured intent")
        return self.answer


def retrieve(
    wdi: WellDefinedIntent,
    index: VectorIndex,
    embedder: ModelGateway,
    k: int = 6,
) -> list[RetrievedContext]:
    """Top-k contexts for the well-defined intent, ranked from 1.

    The query embeds the scenario classification alone: the well-defined
    intent is exactly the statement meant to query the knowledge base.
    """
    vector = embedder.embed_one(wdi.scenario_type)
    hits = index.query(vector, k=k)
    return [
        RetrievedContext(
            node_id=node_id,
            text=index.get(node_id).payload.original_text,
            score=score,
            rank=rank,
        )
        for rank, (node_id, score) in enumerate(hits, start=1)
    ]


def _lexical_score(scenario_tokens: set[str], context: RetrievedContext) -> float:
    if not scenario_tokens:
        return 0.0
    return len(scenario_tokens & token_set(context.text)) / len(scenario_tokens)


def _model_score(context: RetrievedContext, wdi: WellDefinedIntent, chat: ModelGateway) -> float:
    """Pointwise relevance judged by the chat model; unparseable reply = 0."""
    prompt = (
        "Rate from 0 to 10 how relevant the following context is to the scenario "
        f"{wdi.scenario_type}. Reply with a single number.\n\nContext:\n{context.text}"
    )
    reply = chat.chat("instruction", prompt).text
    try:
        return max(0.0, min(10.0, float(reply.strip().split()[0]))) / 10.0
    except (ValueError, IndexError):
        return 0.0


def rerank(
    contexts: list[RetrievedContext],
    wdi: WellDefinedIntent,
    top: int = 3,
    scorer: str = "lexical",
    chat: ModelGateway | None = None,
) -> list[RetrievedContext]:
    """Rescore contexts and keep the best ``top``, re-ranked from 1.

    The default scorer is the deterministic lexical overlap between the
    scenario tokens and the context; ties keep the original retrieval order.
    The "model" scorer delegates pointwise judging to the chat model.
    """
    if not contexts:
        raise BadParams("rerank requires at least one context")
    if scorer == "lexical":
        scenario_tokens = token_set(wdi.scenario_type)
        scored = [(_lexical_score(scenario_tokens, ctx), ctx) for ctx in contexts]
    elif scorer == "model":
        if chat is None:
            raise BadParams("model reranker requires a chat gateway")
        scored = [(_model_score(ctx, wdi, chat), ctx) for ctx in contexts]
    else:
        raise BadParams(f"unknown reranker {scorer!r}")

    scored.sort(key=lambda pair: (-pair[0], pair[1].rank))
    return [
        RetrievedContext(node_id=ctx.node_id, text=ctx.text, score=score, rank=rank)
        for rank, (score, ctx) in enumerate(scored[: min(top, len(scored))], start=1)
    ]


def assemble_generation_prompt(
    contexts: list[RetrievedContext] | None,
    scenario: str,
) -> str:
    """Generation prompt carrying the ranked contexts; None omits the block."""
    if contexts is None:
        return prompts.generation_prompt(None, scenario)
    block = "\n\n".join(ctx.text for ctx in contexts)
    return prompts.generation_prompt(block, scenario)


def generate_structured_intent(
    contexts: list[RetrievedContext] | None,
    scenario: str,
    chat: ModelGateway,
    generation_kind: str = "instruction",
) -> StructuredNetworkIntent:
    """Prompt the instruction model and parse its reply."""
    prompt = assemble_generation_prompt(contexts, scenario)
    reply = chat.chat(generation_kind, prompt).text
    try:
        intent = parse_structured_intent(reply)
    except IntentGatewayError as exc:
        exc.raw_output = reply
        raise
    provenance = tuple(ctx.node_id for ctx in contexts) if contexts else ()
    return StructuredNetworkIntent(
        scenario_type=intent.scenario_type,
        kpis=intent.kpis,
        provenance=provenance,
        raw_model_output=reply,
    )


def translate(
    intent: IntentText,
    index: VectorIndex,
    gateway: ModelGateway,
    config: PipelineConfig | None = None,
    catalog: ScenarioCatalog | None = None,
    catalog_cache: CatalogCache | None = None,
) -> TranslationOutcome:
    """Full intent-RAG translation of one intent against the knowledge base."""
    config = config or PipelineConfig()
    started = time.perf_counter()
    contexts: list[RetrievedContext] = []
    try:
        if catalog is None:
            cache = catalog_cache or CatalogCache()
            catalog = cache.get(index, gateway)
        wdi = refine(intent, catalog, gateway)
        contexts = retrieve(wdi, index, gateway, k=config.retrieve_k)
        contexts = rerank(
            contexts, wdi, top=config.rerank_top, scorer=config.reranker, chat=gateway
        )
        structured = generate_structured_intent(
            contexts, wdi.scenario_type, gateway, config.generation_kind
        )
    except IntentGatewayError as exc:
        exc.contexts = tuple(contexts)
        raise
    report = validate(structured)
    duration = time.perf_counter() - started
    logger.info(
        "translated %r -> %s in %.3fs (%d violations)",
        intent.text,
        structured.scenario_type,
        duration,
        len(report.violations),
    )
    return TranslationOutcome(
        pipeline="intent_rag",
        intent_text=intent.text,
        answer=structured,
        report=report,
        contexts=tuple(contexts),
        duration_seconds=duration,
    )
