"""Metric suite and comparison harness for the translation pipelines.

Six scores, all in [0, 1]:

- context_precision / context_recall / context_entity_recall judge the
  retrieval side against the ground truth;
- answer_relevancy / answer_correctness / faithfulness judge the generated
  answer.

The default judges are deterministic pattern extractors so that the whole
evaluation is reproducible on the mock backend; model-based judging
(reverse-question relevancy) is opt-in. ``run_eval`` translates every
dataset sample with every requested pipeline, times it, scores whatever is
applicable, and aggregates per-pipeline means. Per-sample errors are
recorded as failures without aborting the run; a failed translation scores
answer_correctness 0 and leaves the other answer metrics absent.
"""

from __future__ import annotations

import json
import logging
import re
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from intent_gateway.baselines import norag_translate, vanilla_translate
from intent_gateway.config import PIPELINE_KINDS
from intent_gateway.errors import (
    BadParams,
    EmptyDataset,
    IntentGatewayError,
    MissingContexts,
    NoClaims,
)
from intent_gateway.gateway import ModelGateway
from intent_gateway.intents import (
    FreeTextAnswer,
    StructuredNetworkIntent,
    parse_structured_intent,
    serialize_intent,
    serialize_kpi,
    format_value,
    validate,
)
from intent_gateway.refinement import CatalogCache, IntentText
from intent_gateway.structuring import PipelineConfig, TranslationOutcome, translate

logger = logging.getLogger(__name__)

METRIC_NAMES = (
    "context_precision",
    "context_recall",
    "context_entity_recall",
    "answer_relevancy",
    "answer_correctness",
    "faithfulness",
)

_QUANTITY_RE = re.compile(
    r"(?<![\w^.-])([-+]?\d+(?:\.\d+)?)\s*(Mbps|Gbps|ms|dBm|dB|fps)(?![A-Za-z])",
    re.IGNORECASE,
)
_SCI_RE = re.compile(r"10\^\{?([-+]?\d+)\}?")
_RESOLUTION_RE = re.compile(r"\b(3K|4K|8K|1080p)\b", re.IGNORECASE)

_METRIC_NAME_PATTERNS = (
    ("packet loss", "packet_loss_rate"),
    ("data rate", "throughput"),
    ("throughput", "throughput"),
    ("bandwidth", "throughput"),
    ("rsrp", "rsrp"),
    ("sinr", "sinr"),
    ("resolution", "resolution"),
    ("delay", "delay"),
    ("latency", "delay"),
    ("rtt", "delay"),
)

_UNIT_CANONICAL = {"mbps": "Mbps", "gbps": "Gbps", "ms": "ms", "dbm": "dBm", "db": "dB", "fps": "fps"}


@dataclass(frozen=True)
class Entity:
    kind: str  # quantity | scenario_name | metric_name | resolution_label
    normalized_form: str


def extract_entities(text: str, scenario_names: tuple[str, ...] = ()) -> frozenset[Entity]:
    """Deterministic entity extraction: quantities with units, scientific
    notation, resolution labels, metric names, and known scenario names."""
    found: set[Entity] = set()
    for value, unit in _QUANTITY_RE.findall(text):
        normalized = f"{format_value(float(value))} {_UNIT_CANONICAL[unit.lower()]}".lower()
        found.add(Entity("quantity", normalized))
    for exponent in _SCI_RE.findall(text):
        found.add(Entity("quantity", format_value(float(f"1e{int(exponent)}")).lower()))
    for label in _RESOLUTION_RE.findall(text):
        found.add(Entity("resolution_label", label.lower()))
    lowered = text.lower()
    for needle, name in _METRIC_NAME_PATTERNS:
        if needle in lowered:
            found.add(Entity("metric_name", name))
    for scenario in scenario_names:
        if scenario.lower() in lowered:
            found.add(Entity("scenario_name", scenario.lower()))
    return frozenset(found)


def _value_entities(entities: frozenset[Entity]) -> frozenset[Entity]:
    return frozenset(e for e in entities if e.kind in ("quantity", "resolution_label"))


@dataclass
class EvalSample:
    """One (intent, ground truth) pair together with one pipeline's output."""

    intent: str
    ground_truth: StructuredNetworkIntent
    pipeline: str
    contexts: list[str] | None = None  # None = pipeline retrieves nothing (no-RAG)
    answer: StructuredNetworkIntent | FreeTextAnswer | None = None
    duration_seconds: float = 0.0
    failed: bool = False
    error: str | None = None
    scenario_names: tuple[str, ...] = ()

    @property
    def ground_truth_text(self) -> str:
        return serialize_intent(self.ground_truth)

    @property
    def answer_text(self) -> str:
        if isinstance(self.answer, StructuredNetworkIntent):
            return serialize_intent(self.answer)
        if isinstance(self.answer, FreeTextAnswer):
            return self.answer.text
        raise BadParams("sample has no answer")


def _require_contexts(sample: EvalSample) -> list[str]:
    if sample.contexts is None:
        raise MissingContexts(f"{sample.pipeline} sample has no retrieved contexts")
    return sample.contexts


def _context_entities(sample: EvalSample) -> frozenset[Entity]:
    union: set[Entity] = set()
    for context in _require_contexts(sample):
        union |= extract_entities(context, sample.scenario_names)
    return frozenset(union)


def context_entity_recall(sample: EvalSample) -> float:
    """Share of ground-truth entities present in the retrieved contexts.

    Vacuously 1.0 when the ground truth has no entities.
    """
    gt_entities = extract_entities(sample.ground_truth_text, sample.scenario_names)
    if not gt_entities:
        return 1.0
    return len(gt_entities & _context_entities(sample)) / len(gt_entities)


def context_precision(sample: EvalSample) -> float:
    """Rank-weighted precision: mean precision@k over the relevant ranks.

    A context is relevant when it contains at least one ground-truth entity.
    """
    contexts = _require_contexts(sample)
    gt_entities = extract_entities(sample.ground_truth_text, sample.scenario_names)
    relevant_seen = 0
    weighted = 0.0
    total_relevant = 0
    for k, context in enumerate(contexts, start=1):
        relevant = bool(gt_entities & extract_entities(context, sample.scenario_names))
        if relevant:
            relevant_seen += 1
            total_relevant += 1
            weighted += relevant_seen / k
    return weighted / max(1, total_relevant)


def context_recall(sample: EvalSample) -> float:
    """Share of ground-truth KPI statements fully covered by the contexts.

    A statement is covered when every entity it mentions appears somewhere
    in the retrieved contexts.
    """
    _require_contexts(sample)
    context_entities = _context_entities(sample)
    statements = [serialize_kpi(kpi) for kpi in sample.ground_truth.kpis]
    covered = sum(
        1
        for statement in statements
        if extract_entities(statement, sample.scenario_names) <= context_entities
    )
    return covered / len(statements)


def faithfulness(sample: EvalSample) -> float:
    """Share of answer claims whose values are supported by the contexts."""
    contexts = _require_contexts(sample)
    context_values = _value_entities(_context_entities(sample))

    if isinstance(sample.answer, StructuredNetworkIntent):
        claims = [serialize_kpi(kpi) for kpi in sample.answer.kpis]
        if not claims:
            raise NoClaims("answer has no KPI items")
        supported = 0
        for claim, kpi in zip(claims, sample.answer.kpis):
            values = _value_entities(extract_entities(claim, sample.scenario_names))
            if values:
                supported += values <= context_values
            else:
                supported += any(str(kpi.value) in context for context in contexts)
        return supported / len(claims)

    if isinstance(sample.answer, FreeTextAnswer):
        values = _value_entities(extract_entities(sample.answer.text, sample.scenario_names))
        if not values:
            raise NoClaims("free-text answer has no extractable value claims")
        return len(values & context_values) / len(values)

    raise NoClaims("sample has no answer")


def _clamped_cosine(a: np.ndarray, b: np.ndarray) -> float:
    na, nb = float(np.linalg.norm(a)), float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        return 0.0
    return float(min(1.0, max(0.0, float(np.dot(a, b)) / (na * nb))))


def answer_relevancy(
    sample: EvalSample,
    embedder: ModelGateway,
    chat: ModelGateway | None = None,
    n_questions: int = 3,
) -> float:
    """Embedding similarity between the intent and the answer.

    With a chat gateway, switches to the reverse-question form: the mean
    similarity between the intent and model-generated questions about the
    answer.
    """
    intent_vector = embedder.embed_one(sample.intent)
    if chat is None:
        return _clamped_cosine(intent_vector, embedder.embed_one(sample.answer_text))
    scores = []
    for i in range(n_questions):
        prompt = (
            f"Write question {i + 1} of {n_questions} that the following answer "
            f"would respond to:\n\n{sample.answer_text}"
        )
        question = chat.chat("instruction", prompt).text
        scores.append(_clamped_cosine(intent_vector, embedder.embed_one(question)))
    return float(np.mean(scores))


def _item_key(kpi) -> tuple:
    return ("kpi", kpi.metric, kpi.comparator, kpi.value, kpi.unit, kpi.qualifier)


def answer_correctness(
    sample: EvalSample,
    embedder: ModelGateway,
    f1_weight: float = 0.75,
) -> float:
    """Agreement with the ground truth: weighted KPI-level F1 plus embedding
    similarity (default 0.75/0.25).

    Structured answers match items on (metric, comparator, value, unit,
    qualifier) with the scenario counted as one item; free-text answers fall
    back to F1 over extractable entities. A failed translation scores 0.
    """
    if sample.answer is None:
        return 0.0
    gt = sample.ground_truth
    if isinstance(sample.answer, StructuredNetworkIntent):
        answer_items = {("scenario", sample.answer.scenario_type.lower())} | {
            _item_key(kpi) for kpi in sample.answer.kpis
        }
        gt_items = {("scenario", gt.scenario_type.lower())} | {_item_key(kpi) for kpi in gt.kpis}
    else:
        answer_items = set(extract_entities(sample.answer.text, sample.scenario_names))
        gt_items = set(extract_entities(sample.ground_truth_text, sample.scenario_names))

    tp = len(answer_items & gt_items)
    fp = len(answer_items - gt_items)
    fn = len(gt_items - answer_items)
    f1 = 2 * tp / (2 * tp + fp + fn) if tp else 0.0

    similarity = _clamped_cosine(
        embedder.embed_one(sample.answer_text), embedder.embed_one(sample.ground_truth_text)
    )
    return f1_weight * f1 + (1.0 - f1_weight) * similarity


@dataclass(frozen=True)
class DatasetRecord:
    intent: str
    ground_truth_text: str

    def parsed_ground_truth(self) -> StructuredNetworkIntent:
        gt = parse_structured_intent(self.ground_truth_text)
        report = validate(gt)
        if not report.valid:
            raise BadParams(
                f"ground truth for {self.intent!r} is invalid: {report.violations}"
            )
        return gt


def load_dataset(path) -> list[DatasetRecord]:
    """Read a JSONL dataset: one {"intent", "ground_truth"} object per line."""
    records = []
    for line_no, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        try:
            data = json.loads(line)
            records.append(
                DatasetRecord(intent=data["intent"], ground_truth_text=data["ground_truth"])
            )
        except (json.JSONDecodeError, KeyError) as exc:
            raise BadParams(f"{path}:{line_no}: malformed dataset record: {exc}") from exc
    if not records:
        raise EmptyDataset(f"dataset {path} has no records")
    return records


@dataclass
class PipelineReport:
    pipeline: str
    metric_means: dict[str, float | None] = field(default_factory=dict)
    mean_duration_seconds: float = 0.0
    n_samples: int = 0
    n_failures: int = 0


@dataclass
class EvalReport:
    pipelines: dict[str, PipelineReport]
    samples: list[dict]

    def to_dict(self, include_timing: bool = True) -> dict:
        """Report as JSON-ready data; ``include_timing=False`` drops the
        wall-clock fields so the result is byte-reproducible on the mock
        backend."""
        pipelines = {}
        for kind, report in self.pipelines.items():
            entry = {
                "metric_means": report.metric_means,
                "n_samples": report.n_samples,
                "n_failures": report.n_failures,
            }
            if include_timing:
                entry["mean_duration_seconds"] = report.mean_duration_seconds
            pipelines[kind] = entry
        samples = []
        for sample in self.samples:
            sample = dict(sample)
            if not include_timing:
                sample.pop("duration_seconds", None)
            samples.append(sample)
        return {"pipelines": pipelines, "samples": samples}

    def to_json(self, include_timing: bool = True) -> str:
        return json.dumps(self.to_dict(include_timing), indent=2, ensure_ascii=False)

    def to_csv(self) -> str:
        """Plot-ready table: one row per metric, one column per pipeline."""
        kinds = list(self.pipelines)
        lines = ["metric," + ",".join(kinds)]
        for metric in METRIC_NAMES:
            cells = []
            for kind in kinds:
                value = self.pipelines[kind].metric_means.get(metric)
                cells.append("" if value is None else f"{value:.6f}")
            lines.append(f"{metric}," + ",".join(cells))
        lines.append(
            "mean_duration_seconds,"
            + ",".join(f"{self.pipelines[kind].mean_duration_seconds:.6f}" for kind in kinds)
        )
        return "\n".join(lines) + "\n"


def score_sample(sample: EvalSample, embedder: ModelGateway) -> dict[str, float | None]:
    """All applicable metric values for one sample; absent metrics are None."""
    scores: dict[str, float | None] = {name: None for name in METRIC_NAMES}
    if sample.contexts is not None:
        scores["context_precision"] = context_precision(sample)
        scores["context_recall"] = context_recall(sample)
        scores["context_entity_recall"] = context_entity_recall(sample)
        if sample.answer is not None:
            try:
                scores["faithfulness"] = faithfulness(sample)
            except NoClaims:
                pass
    if sample.answer is not None:
        scores["answer_relevancy"] = answer_relevancy(sample, embedder)
    scores["answer_correctness"] = answer_correctness(sample, embedder)
    return scores


def run_eval(
    dataset: list[DatasetRecord],
    pipelines: tuple[str, ...] = PIPELINE_KINDS,
    index_builders: dict | None = None,
    gateway: ModelGateway | None = None,
    config: PipelineConfig | None = None,
) -> EvalReport:
    """Translate, time, and score the dataset with each pipeline.

    ``index_builders`` maps pipeline kind to a zero-argument callable
    returning that pipeline's index; required for intent_rag and
    vanilla_rag.
    """
    if not dataset:
        raise EmptyDataset("evaluation dataset is empty")
    unknown = [p for p in pipelines if p not in PIPELINE_KINDS]
    if unknown:
        raise BadParams(f"unknown pipelines: {unknown}")
    gateway = gateway or ModelGateway()
    config = config or PipelineConfig()
    index_builders = index_builders or {}

    indexes = {}
    for kind in pipelines:
        if kind == "no_rag":
            continue
        if kind not in index_builders:
            raise BadParams(f"pipeline {kind!r} requires an index builder")
        indexes[kind] = index_builders[kind]()

    ground_truths = [record.parsed_ground_truth() for record in dataset]
    scenario_names = tuple(dict.fromkeys(gt.scenario_type for gt in ground_truths))
    catalog_cache = CatalogCache()

    def run_pipeline(kind: str, intent: IntentText) -> TranslationOutcome:
        if kind == "intent_rag":
            return translate(
                intent, indexes[kind], gateway, config, catalog_cache=catalog_cache
            )
        if kind == "vanilla_rag":
            return vanilla_translate(intent, indexes[kind], gateway)
        return norag_translate(intent, gateway)

    reports = {kind: PipelineReport(pipeline=kind) for kind in pipelines}
    sample_rows: list[dict] = []
    sums: dict[str, dict[str, float]] = {kind: {} for kind in pipelines}
    counts: dict[str, dict[str, int]] = {kind: {} for kind in pipelines}
    durations: dict[str, list[float]] = {kind: [] for kind in pipelines}

    for kind in pipelines:
        for record, gt in zip(dataset, ground_truths):
            sample = EvalSample(
                intent=record.intent,
                ground_truth=gt,
                pipeline=kind,
                scenario_names=scenario_names,
            )
            started = time.perf_counter()
            try:
                outcome = run_pipeline(kind, IntentText(record.intent))
                sample.answer = outcome.answer
                sample.duration_seconds = outcome.duration_seconds
                if kind != "no_rag":
                    sample.contexts = [ctx.text for ctx in outcome.contexts]
            except IntentGatewayError as exc:
                sample.failed = True
                sample.error = f"{type(exc).__name__}: {exc}"
                sample.duration_seconds = time.perf_counter() - started
                if kind != "no_rag" and exc.contexts is not None:
                    sample.contexts = [ctx.text for ctx in exc.contexts]
                logger.warning("%s failed on %r: %s", kind, record.intent, sample.error)

            scores = score_sample(sample, gateway)
            durations[kind].append(sample.duration_seconds)
            report = reports[kind]
            report.n_samples += 1
            report.n_failures += sample.failed
            for name, value in scores.items():
                if value is not None:
                    sums[kind][name] = sums[kind].get(name, 0.0) + value
                    counts[kind][name] = counts[kind].get(name, 0) + 1
            sample_rows.append(
                {
                    "intent": record.intent,
                    "pipeline": kind,
                    "failed": sample.failed,
                    "error": sample.error,
                    "answer": sample.answer_text if sample.answer is not None else None,
                    "scores": scores,
                    "duration_seconds": sample.duration_seconds,
                }
            )

    for kind in pipelines:
        reports[kind].metric_means = {
            name: (sums[kind][name] / counts[kind][name] if counts[kind].get(name) else None)
            for name in METRIC_NAMES
        }
        reports[kind].mean_duration_seconds = float(np.mean(durations[kind]))

    return EvalReport(pipelines=reports, samples=sample_rows)
