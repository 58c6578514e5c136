"""Intent gateway: translate application intents into structured network intents.

Technical documents are ingested into a vector-indexed knowledge base;
incoming natural-language intents are refined against the scenario catalog,
matched with retrieved context, and turned into schema-validated structured
intents. Vanilla-RAG and no-RAG baselines plus a metric suite support
side-by-side comparison of the three pipelines.
"""

from intent_gateway.baselines import norag_translate, vanilla_ingest, vanilla_translate
from intent_gateway.config import PIPELINE_KINDS, GatewayConfig
from intent_gateway.corpus import (
    RawDocument,
    ingest_documents,
    load_document,
    read_manifest,
    split_text,
    summarize_chunk,
)
from intent_gateway.evaluation import EvalSample, extract_entities, load_dataset, run_eval
from intent_gateway.gateway import (
    ChatRequest,
    ChatResponse,
    MockBackend,
    ModelGateway,
    ModelProfile,
    RemoteBackend,
    mock_rules_default,
)
from intent_gateway.intents import (
    FreeTextAnswer,
    Kpi,
    StructuredNetworkIntent,
    parse_structured_intent,
    serialize_intent,
    validate,
)
from intent_gateway.refinement import (
    DomainInstruction,
    IntentText,
    ScenarioCatalog,
    WellDefinedIntent,
    build_catalog,
    refine,
)
from intent_gateway.structuring import (
    PipelineConfig,
    RetrievedContext,
    TranslationOutcome,
    rerank,
    retrieve,
    translate,
)
from intent_gateway.vectorstore import EmbeddedNode, IndexEntry, VectorIndex, embed_and_index

__version__ = "0.1.0"

__all__ = [
    "ChatRequest",
    "ChatResponse",
    "DomainInstruction",
    "EmbeddedNode",
    "EvalSample",
    "FreeTextAnswer",
    "GatewayConfig",
    "IndexEntry",
    "IntentText",
    "Kpi",
    "MockBackend",
    "ModelGateway",
    "ModelProfile",
    "PIPELINE_KINDS",
    "PipelineConfig",
    "RawDocument",
    "RemoteBackend",
    "RetrievedContext",
    "ScenarioCatalog",
    "StructuredNetworkIntent",
    "TranslationOutcome",
    "VectorIndex",
    "WellDefinedIntent",
    "build_catalog",
    "embed_and_index",
    "extract_entities",
    "ingest_documents",
    "load_dataset",
    "load_document",
    "mock_rules_default",
    "norag_translate",
    "parse_structured_intent",
    "read_manifest",
    "refine",
    "rerank",
    "retrieve",
    "run_eval",
    "serialize_intent",
    "split_text",
    "summarize_chunk",
    "translate",
    "validate",
    "vanilla_ingest",
    "vanilla_translate",
]
