"""HTTP surface for programmatic intent submission.

Endpoints:
- POST /v1/knowledge:ingest   build the knowledge base from inline documents
- POST /v1/intents:translate  translate one intent (query param ``pipeline``)
- GET  /v1/catalog            scenario catalog extracted from the index
- POST /v1/eval:run           run the metric suite over an inline dataset
- GET  /healthz               liveness and index stats

Response bodies are deterministic on the mock backend: identical requests
yield byte-identical bodies. Wall-clock timing therefore travels in the
X-Duration-Seconds header, not in the body. Re-ingestion swaps the index
atomically; translations already running keep their snapshot.
"""

from __future__ import annotations

import logging
import threading
from dataclasses import dataclass, field

from fastapi import FastAPI, Query, Request, Response
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from intent_gateway import evaluation
from intent_gateway.baselines import norag_translate, vanilla_ingest, vanilla_translate
from intent_gateway.config import DEFAULT_PIPELINE, PIPELINE_KINDS, GatewayConfig
from intent_gateway.corpus import RawDocument, ingest_documents
from intent_gateway.errors import (
    BadParams,
    EmptyIndex,
    EmptyIntent,
    IntentGatewayError,
    ModelError,
    SchemaViolation,
    UnresolvableIntent,
)
from intent_gateway.intents import FreeTextAnswer
from intent_gateway.refinement import CatalogCache, IntentText
from intent_gateway.structuring import PipelineConfig, TranslationOutcome, translate
from intent_gateway.vectorstore import VectorIndex, load

logger = logging.getLogger(__name__)

_STATUS_BY_ERROR = {
    EmptyIntent: 400,
    BadParams: 400,
    EmptyIndex: 409,
    UnresolvableIntent: 422,
    SchemaViolation: 502,
    ModelError: 502,
}


def _error_code(exc: IntentGatewayError) -> str:
    name = type(exc).__name__
    return "".join(f"_{c.lower()}" if c.isupper() else c for c in name).lstrip("_")


class DocumentIn(BaseModel):
    id: str
    text: str
    source_uri: str = ""
    format_hint: str = "plain"


class IngestRequest(BaseModel):
    documents: list[DocumentIn] = Field(min_length=1)


class TranslateRequest(BaseModel):
    intent: str


class EvalRequest(BaseModel):
    dataset: list[dict] = Field(min_length=1)
    pipelines: list[str] = Field(default_factory=lambda: list(PIPELINE_KINDS))


@dataclass
class ServiceState:
    config: GatewayConfig
    gateway: object
    index: VectorIndex | None = None
    documents: list[RawDocument] = field(default_factory=list)
    vanilla_index: VectorIndex | None = None
    catalog_cache: CatalogCache = field(default_factory=CatalogCache)
    lock: threading.Lock = field(default_factory=threading.Lock)

    def require_index(self) -> VectorIndex:
        if self.index is None or len(self.index) == 0:
            raise EmptyIndex("no knowledge has been ingested")
        return self.index

    def require_vanilla_index(self) -> VectorIndex:
        with self.lock:
            if self.vanilla_index is None:
                if not self.documents:
                    raise EmptyIndex(
                        "vanilla pipeline needs raw documents; ingest via the API first"
                    )
                self.vanilla_index = vanilla_ingest(
                    self.documents, self.gateway, window=self.config.vanilla_window
                )
        return self.vanilla_index

    def pipeline_config(self) -> PipelineConfig:
        return PipelineConfig(
            retrieve_k=self.config.retrieve_k, rerank_top=self.config.rerank_top
        )


def _translate_body(outcome: TranslationOutcome) -> dict:
    if isinstance(outcome.answer, FreeTextAnswer):
        return {"pipeline": outcome.pipeline, "answer_text": outcome.answer.text}
    body = {"pipeline": outcome.pipeline}
    body.update(outcome.answer.to_dict())
    body["violations"] = list(outcome.report.violations) if outcome.report else []
    return body


def create_app(
    config: GatewayConfig | None = None,
    gateway=None,
    index: VectorIndex | None = None,
    documents: list[RawDocument] | None = None,
) -> FastAPI:
    """Build the service; loads the configured index file when present."""
    config = config or GatewayConfig()
    gateway = gateway or config.build_gateway()
    if index is None and config.index_path:
        index = load(config.index_path)
    state = ServiceState(
        config=config, gateway=gateway, index=index, documents=list(documents or [])
    )

    app = FastAPI(title="intent-gateway", version="0.1.0")
    app.state.service = state

    @app.exception_handler(IntentGatewayError)
    async def handle_gateway_error(request: Request, exc: IntentGatewayError):
        status = 400
        for klass, code in _STATUS_BY_ERROR.items():
            if isinstance(exc, klass):
                status = code
                break
        return JSONResponse(
            status_code=status,
            content={"error": {"code": _error_code(exc), "message": str(exc)}},
        )

    @app.get("/healthz")
    def healthz():
        return {
            "status": "ok",
            "backend": state.config.backend,
            "index_entries": len(state.index) if state.index else 0,
        }

    @app.post("/v1/knowledge:ingest")
    def ingest(request: IngestRequest):
        docs = [
            RawDocument(
                id=doc.id, text=doc.text, source_uri=doc.source_uri, format_hint=doc.format_hint
            )
            for doc in request.documents
        ]
        fresh = ingest_documents(
            docs,
            state.gateway,
            max_tokens=state.config.chunk_max_tokens,
            overlap=state.config.chunk_overlap,
        )
        with state.lock:
            state.index = fresh
            state.documents = docs
            state.vanilla_index = None
        return {
            "documents": len(docs),
            "indexed_entries": len(fresh),
            "index_version": fresh.version,
        }

    @app.post("/v1/intents:translate")
    def translate_intent(
        request: TranslateRequest,
        response: Response,
        pipeline: str = Query(default=DEFAULT_PIPELINE),
    ):
        if pipeline not in PIPELINE_KINDS:
            raise BadParams(f"unknown pipeline {pipeline!r}; expected one of {PIPELINE_KINDS}")
        intent = IntentText(request.intent)
        if pipeline == "intent_rag":
            outcome = translate(
                intent,
                state.require_index(),
                state.gateway,
                state.pipeline_config(),
                catalog_cache=state.catalog_cache,
            )
        elif pipeline == "vanilla_rag":
            outcome = vanilla_translate(intent, state.require_vanilla_index(), state.gateway)
        else:
            outcome = norag_translate(intent, state.gateway)
        response.headers["X-Duration-Seconds"] = f"{outcome.duration_seconds:.6f}"
        return _translate_body(outcome)

    @app.get("/v1/catalog")
    def catalog():
        result = state.catalog_cache.get(state.require_index(), state.gateway)
        return {"scenarios": list(result.names)}

    @app.post("/v1/eval:run")
    def eval_run(request: EvalRequest):
        records = []
        for row in request.dataset:
            try:
                records.append(
                    evaluation.DatasetRecord(
                        intent=row["intent"], ground_truth_text=row["ground_truth"]
                    )
                )
            except KeyError as exc:
                raise BadParams(f"dataset record missing field: {exc}") from exc
        pipelines = tuple(request.pipelines)
        builders = {}
        if "intent_rag" in pipelines:
            builders["intent_rag"] = state.require_index
        if "vanilla_rag" in pipelines:
            builders["vanilla_rag"] = state.require_vanilla_index
        report = evaluation.run_eval(
            records,
            pipelines=pipelines,
            index_builders=builders,
            gateway=state.gateway,
            config=state.pipeline_config(),
        )
        return report.to_dict()

    return app


def serve(config: GatewayConfig, host: str = "127.0.0.1", port: int = 8080) -> None:
    """Run the service under uvicorn until interrupted; graceful shutdown
    lets in-flight translations finish."""
    import uvicorn

    uvicorn.run(
        create_app(config),
        host=host,
        port=port,
        limit_concurrency=config.max_concurrent_requests,
    )
