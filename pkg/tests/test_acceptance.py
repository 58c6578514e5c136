"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Everything runs against the deterministic mock backend and the bundled
sample corpus. Run with plain ``pytest``; the per-criterion lines print
outside pytest's capture so they are always visible.
"""

import time
from contextlib import contextmanager

import numpy as np
import pytest
from fastapi.testclient import TestClient
from hypothesis import HealthCheck, given, settings

from intent_strategies import structured_intents
from intent_gateway import evaluation as ev
from intent_gateway import sampledata
from intent_gateway.baselines import vanilla_ingest
from intent_gateway.corpus import ModalityChunk, ingest_documents, split_text
from intent_gateway.errors import SchemaViolation
from intent_gateway.intents import parse_structured_intent, serialize_intent
from intent_gateway.refinement import IntentText, refine
from intent_gateway.service import create_app
from intent_gateway.structuring import translate
from intent_gateway.vectorstore import EmbeddedNode, NodePayload, VectorIndex


@contextmanager
def criterion(capsys, number, description):
    try:
        yield
    except BaseException:
        with capsys.disabled():
            print(f"ACCEPTANCE {number:>2} FAIL  {description}")
        raise
    with capsys.disabled():
        print(f"ACCEPTANCE {number:>2} PASS  {description}")


@pytest.fixture(scope="module")
def eval_report(sample_docs, gateway):
    dataset = [
        ev.DatasetRecord(intent=r["intent"], ground_truth_text=r["ground_truth"])
        for r in sampledata.SAMPLE_DATASET
    ]
    return ev.run_eval(
        dataset,
        pipelines=("intent_rag", "vanilla_rag", "no_rag"),
        index_builders={
            "intent_rag": lambda: ingest_documents(sample_docs, gateway),
            "vanilla_rag": lambda: vanilla_ingest(sample_docs, gateway),
        },
        gateway=gateway,
    )


def test_criterion_1_ground_truth_reproduction(capsys, sample_index, gateway, gt_4k, gt_vr):
    with criterion(capsys, 1, "end-to-end reproduction of both ground-truth rows, exact, < 1 s"):
        for intent_text, expected in ((sampledata.INTENT_4K, gt_4k), (sampledata.INTENT_VR, gt_vr)):
            started = time.perf_counter()
            outcome = translate(IntentText(intent_text), sample_index, gateway)
            elapsed = time.perf_counter() - started
            assert outcome.intent.scenario_type == expected.scenario_type
            assert outcome.intent.kpis == expected.kpis
            assert outcome.report.valid
            assert elapsed < 1.0


def test_criterion_2_refinement_reproduction(capsys, sample_catalog, gateway):
    with criterion(capsys, 2, "refinement classifies the three stated intents exactly, < 100 ms"):
        cases = (
            (sampledata.INTENT_VR, "3K Cloud VR (Game)"),
            ("4K On Demand Video", "4K On Demand Video"),
            (
                "I want internet access with fast browsing service in the airoplane",
                "Airplanes connectivity",
            ),
        )
        for intent_text, expected in cases:
            started = time.perf_counter()
            wdi = refine(IntentText(intent_text), sample_catalog, gateway)
            elapsed = time.perf_counter() - started
            assert wdi.scenario_type == expected
            assert elapsed < 0.1


def test_criterion_3_chunker_conformance(capsys):
    with criterion(capsys, 3, "splitter postconditions over 1000 randomized cases, zero failures"):
        rng = np.random.default_rng(20240811)
        for case in range(1000):
            n_tokens = int(rng.integers(1, 2000))
            if case % 2 == 0:
                max_tokens, overlap = 128, 10
            else:
                max_tokens = int(rng.integers(1, 256))
                overlap = int(rng.integers(0, max_tokens))
            chunk = ModalityChunk(
                id="c",
                doc_id="d",
                modality="text",
                content=" ".join(f"t{i}" for i in range(n_tokens)),
                order_index=0,
            )
            nodes = split_text(chunk, max_tokens=max_tokens, overlap=overlap)
            stride = max_tokens - overlap
            assert nodes[0].token_start == 0
            assert nodes[-1].token_end == n_tokens
            for i, node in enumerate(nodes):
                assert node.token_start == i * stride
                assert 0 < node.token_end - node.token_start <= max_tokens
                assert node.text
            for a, b in zip(nodes, nodes[1:]):
                assert a.token_end - b.token_start == overlap
                assert b.token_start <= a.token_end


def _oracle_ranking(nodes, query):
    qnorm = sum(float(x) * float(x) for x in query) ** 0.5
    scored = []
    for position, node in enumerate(nodes):
        vnorm = sum(float(x) * float(x) for x in node.vector) ** 0.5
        if qnorm == 0.0 or vnorm == 0.0:
            score = 0.0
        else:
            score = sum(float(a) * float(b) for a, b in zip(node.vector, query)) / (qnorm * vnorm)
        scored.append((position, node.node_id, score))
    scored.sort(key=lambda item: (-item[2], item[0]))
    return [node_id for _, node_id, _ in scored]


def test_criterion_4_retrieval_oracle_equivalence(capsys):
    with criterion(capsys, 4, "index ranking equals brute-force cosine on 100 random corpora"):
        rng = np.random.default_rng(7)
        dim = 256
        for _ in range(100):
            n = int(rng.integers(1, 65))
            nodes = []
            for i in range(n):
                vec = rng.normal(size=dim).astype(np.float32)
                roll = rng.random()
                if roll < 0.1:
                    vec = np.zeros(dim, dtype=np.float32)
                elif roll < 0.35 and nodes:
                    vec = nodes[-1].vector  # exact duplicates exercise tie-break
                nodes.append(
                    EmbeddedNode(
                        node_id=f"n{i}",
                        vector=vec,
                        payload=NodePayload(original_text=f"n{i}", modality="text", doc_id="d"),
                    )
                )
            index = VectorIndex(dimension=dim)
            index.upsert(nodes)
            query = rng.normal(size=dim).astype(np.float32)
            k = int(rng.integers(1, 80))
            got = [node_id for node_id, _ in index.query(query, k=k)]
            assert got == _oracle_ranking(nodes, query)[: min(k, n)]


def test_criterion_5_metric_fixed_points_and_hand_counts(capsys, gateway, gt_4k):
    with criterion(capsys, 5, "metric fixed points and hand-counted values, exact"):
        # perfect sample: answer == GT, context == serialized GT, intent == answer text
        text = serialize_intent(gt_4k)
        perfect = ev.EvalSample(
            intent=text, ground_truth=gt_4k, pipeline="intent_rag", contexts=[text], answer=gt_4k
        )
        assert ev.context_precision(perfect) == 1.0
        assert ev.context_recall(perfect) == 1.0
        assert ev.context_entity_recall(perfect) == 1.0
        assert ev.faithfulness(perfect) == 1.0
        assert ev.answer_relevancy(perfect, gateway) == pytest.approx(1.0, abs=1e-6)
        assert ev.answer_correctness(perfect, gateway) == pytest.approx(1.0)

        # 4 ground-truth entities, contexts carry exactly 2 -> 0.5
        gt_small = parse_structured_intent(
            "Scenario Type: Urban macro, Key Performance Factors: "
            "Data Rate/Throughput: 50 Mbps, Coverage Level CSI RSRP: -110 dBm"
        )
        two_of_four = ev.EvalSample(
            intent="x",
            ground_truth=gt_small,
            pipeline="intent_rag",
            contexts=["Throughput of 50 Mbps is typical."],
        )
        assert ev.context_entity_recall(two_of_four) == 0.5

        # [irrelevant, relevant] -> precision@2 = 0.5
        ranked = ev.EvalSample(
            intent="x",
            ground_truth=gt_small,
            pipeline="intent_rag",
            contexts=["nothing here", "50 Mbps everywhere"],
        )
        assert ev.context_precision(ranked) == 0.5

        # 3 of 6 answer claims supported -> 0.5
        half_supported = ev.EvalSample(
            intent="x",
            ground_truth=gt_4k,
            pipeline="intent_rag",
            contexts=["rates of 30 Mbps with RTT < 100 ms and loss 10^-3"],
            answer=gt_4k,
        )
        assert ev.faithfulness(half_supported) == 0.5


def test_criterion_6_directional_retrieval_advantage(capsys, eval_report):
    with criterion(
        capsys, 6, "intent-RAG >= vanilla-RAG on context recall metrics, strictly better once"
    ):
        for metric in ("context_entity_recall", "context_recall"):
            intent_mean = eval_report.pipelines["intent_rag"].metric_means[metric]
            vanilla_mean = eval_report.pipelines["vanilla_rag"].metric_means[metric]
            assert intent_mean >= vanilla_mean

            by_intent = {}
            for row in eval_report.samples:
                if row["scores"][metric] is not None:
                    by_intent.setdefault(row["intent"], {})[row["pipeline"]] = row["scores"][metric]
            strict = [
                scores
                for scores in by_intent.values()
                if "intent_rag" in scores and "vanilla_rag" in scores
                and scores["intent_rag"] > scores["vanilla_rag"]
            ]
            assert strict, f"no sample with a strict {metric} advantage"


def test_criterion_7_no_rag_correctness_is_weakest(capsys, eval_report):
    with criterion(capsys, 7, "no-RAG mean answer correctness below both RAG pipelines"):
        no_rag = eval_report.pipelines["no_rag"].metric_means["answer_correctness"]
        vanilla = eval_report.pipelines["vanilla_rag"].metric_means["answer_correctness"]
        intent = eval_report.pipelines["intent_rag"].metric_means["answer_correctness"]
        assert no_rag < min(vanilla, intent)


def test_criterion_8_timing_table_shape(capsys, eval_report):
    with criterion(capsys, 8, "per-pipeline mean durations positive and recorded per sample"):
        for kind in ("vanilla_rag", "intent_rag", "no_rag"):
            assert eval_report.pipelines[kind].mean_duration_seconds > 0
        for row in eval_report.samples:
            assert row["duration_seconds"] > 0
        csv = eval_report.to_csv()
        assert csv.splitlines()[-1].startswith("mean_duration_seconds,")


@settings(max_examples=1000, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(intent=structured_intents())
def test_criterion_9_parser_round_trip(intent):
    parsed = parse_structured_intent(serialize_intent(intent))
    assert parsed.scenario_type == intent.scenario_type
    assert parsed.kpis == intent.kpis


def test_criterion_9_malformed_classes(capsys):
    with criterion(
        capsys, 9, "1000 serialize/parse round-trips plus the three malformed classes"
    ):
        with pytest.raises(SchemaViolation):
            parse_structured_intent("Key Performance Factors: Delay: 10 ms")  # no header
        with pytest.raises(SchemaViolation):
            parse_structured_intent("Scenario Type: X")  # zero KPIs
        with pytest.raises(SchemaViolation):
            parse_structured_intent(  # duplicate metric
                "Scenario Type: X, Key Performance Factors: Delay: 10 ms, Delay: 20 ms"
            )


def test_criterion_10_service_contract(capsys, sample_docs, sample_index, gateway, gt_4k):
    with criterion(capsys, 10, "HTTP examples return stated statuses/bodies, byte-identical"):
        client = TestClient(create_app(gateway=gateway, index=sample_index, documents=sample_docs))

        response = client.post("/v1/intents:translate", json={"intent": "4K On Demand Video"})
        assert response.status_code == 200
        body = response.json()
        assert body["scenario_type"] == gt_4k.scenario_type
        returned = parse_structured_intent(
            serialize_intent(
                type(gt_4k)(
                    scenario_type=body["scenario_type"],
                    kpis=tuple(
                        type(gt_4k.kpis[0])(
                            metric=k["metric"],
                            comparator=k["comparator"],
                            value=k["value"],
                            unit=k["unit"],
                            qualifier=k["qualifier"],
                        )
                        for k in body["kpis"]
                    ),
                )
            )
        )
        assert returned.kpis == gt_4k.kpis

        empty = client.post("/v1/intents:translate", json={"intent": ""})
        assert empty.status_code == 400
        assert empty.json()["error"]["code"] == "empty_intent"

        no_rag = client.post(
            "/v1/intents:translate?pipeline=no_rag", json={"intent": sampledata.INTENT_VR}
        )
        assert no_rag.status_code == 200
        assert no_rag.json() == {"pipeline": "no_rag", "answer_text": "Scenario Type: UNKNOWN"}

        first = client.post("/v1/intents:translate", json={"intent": sampledata.INTENT_4K})
        second = client.post("/v1/intents:translate", json={"intent": sampledata.INTENT_4K})
        assert first.content == second.content
