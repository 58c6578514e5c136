import pytest

from intent_gateway import sampledata
from intent_gateway.errors import BadParams, EmptyIndex, UnresolvableIntent
from intent_gateway.refinement import IntentText, WellDefinedIntent
from intent_gateway.structuring import (
    PipelineConfig,
    RetrievedContext,
    assemble_generation_prompt,
    rerank,
    retrieve,
    translate,
)
from intent_gateway.vectorstore import VectorIndex


def wdi(scenario: str) -> WellDefinedIntent:
    return WellDefinedIntent(scenario_type=scenario, original_intent=IntentText("x"))


def ctx(node_id: str, text: str, score: float, rank: int) -> RetrievedContext:
    return RetrievedContext(node_id=node_id, text=text, score=score, rank=rank)


class TestRetrieve:
    def test_top_context_contains_kpi_row(self, sample_index, gateway):
        contexts = retrieve(wdi("4K On Demand Video"), sample_index, gateway)
        assert contexts[0].rank == 1
        assert "30 Mbps" in contexts[0].text

    def test_clamps_to_index_size(self, sample_index, gateway):
        contexts = retrieve(wdi("4K On Demand Video"), sample_index, gateway, k=50)
        assert len(contexts) == len(sample_index)
        assert [c.rank for c in contexts] == list(range(1, len(sample_index) + 1))

    def test_scores_non_increasing(self, sample_index, gateway):
        contexts = retrieve(wdi("3K Cloud VR (Game)"), sample_index, gateway)
        scores = [c.score for c in contexts]
        assert scores == sorted(scores, reverse=True)

    def test_absent_scenario_still_returns(self, sample_index, gateway):
        contexts = retrieve(wdi("submarine telemetry"), sample_index, gateway)
        assert contexts  # best-effort, low scores allowed

    def test_empty_index(self, gateway):
        with pytest.raises(EmptyIndex):
            retrieve(wdi("x"), VectorIndex(dimension=256), gateway)


class TestRerank:
    def test_full_overlap_beats_none_regardless_of_order(self):
        contexts = [
            ctx("none", "totally unrelated text", 0.9, 1),
            ctx("full", "row about 3K Cloud VR (Game) service", 0.1, 2),
        ]
        out = rerank(contexts, wdi("3K Cloud VR (Game)"), top=2)
        assert [c.node_id for c in out] == ["full", "none"]
        # overlap scores computed by hand: 4/4 and 0/4
        assert out[0].score == 1.0
        assert out[1].score == 0.0

    def test_stable_when_already_ordered(self):
        contexts = [
            ctx("a", "3K Cloud VR (Game)", 0.9, 1),
            ctx("b", "3K Cloud VR (Game)", 0.8, 2),
            ctx("c", "nothing", 0.7, 3),
        ]
        out = rerank(contexts, wdi("3K Cloud VR (Game)"), top=2)
        assert [c.node_id for c in out] == ["a", "b"]

    def test_top_clamps(self):
        contexts = [ctx("a", "x", 0.9, 1)]
        assert len(rerank(contexts, wdi("x"), top=5)) == 1

    def test_output_subset_of_input(self, sample_index, gateway):
        retrieved = retrieve(wdi("4K On Demand Video"), sample_index, gateway, k=4)
        out = rerank(retrieved, wdi("4K On Demand Video"), top=3)
        assert {c.node_id for c in out} <= {c.node_id for c in retrieved}
        assert [c.rank for c in out] == [1, 2, 3]

    def test_empty_contexts_rejected(self):
        with pytest.raises(BadParams):
            rerank([], wdi("x"))

    def test_model_scorer_is_deterministic(self, gateway):
        contexts = [ctx("a", "text one", 0.9, 1), ctx("b", "text two", 0.8, 2)]
        first = rerank(contexts, wdi("x"), top=2, scorer="model", chat=gateway)
        second = rerank(contexts, wdi("x"), top=2, scorer="model", chat=gateway)
        assert first == second


class TestGenerationPrompt:
    def test_contains_given_only_this_information(self):
        prompt = assemble_generation_prompt([ctx("a", "ctx text", 1.0, 1)], "X")
        assert "Given only this information" in prompt

    def test_contexts_present_in_rank_order(self):
        prompt = assemble_generation_prompt(
            [ctx("a", "first ctx", 1.0, 1), ctx("b", "second ctx", 0.5, 2)], "X"
        )
        assert prompt.index("first ctx") < prompt.index("second ctx")

    def test_few_shot_uses_normalized_rtt_form(self):
        prompt = assemble_generation_prompt([ctx("a", "t", 1.0, 1)], "X")
        assert "Delay: RTT < 100 ms" in prompt

    def test_no_context_block_for_norag(self):
        prompt = assemble_generation_prompt(None, "X")
        assert "Provided the following context information" not in prompt
        assert "performance recommendations metrics" in prompt


class TestTranslate:
    def test_vr_fixture_matches_ground_truth(self, sample_index, gateway, gt_vr):
        outcome = translate(IntentText(sampledata.INTENT_VR), sample_index, gateway)
        assert outcome.intent.same_content(gt_vr)
        assert outcome.report.valid
        assert outcome.duration_seconds > 0
        assert outcome.pipeline == "intent_rag"

    def test_4k_fixture_matches_ground_truth(self, sample_index, gateway, gt_4k):
        outcome = translate(IntentText(sampledata.INTENT_4K), sample_index, gateway)
        assert outcome.intent.same_content(gt_4k)

    def test_provenance_points_at_reranked_nodes(self, sample_index, gateway):
        outcome = translate(IntentText(sampledata.INTENT_4K), sample_index, gateway)
        assert outcome.intent.provenance == tuple(c.node_id for c in outcome.contexts)
        assert len(outcome.intent.provenance) <= PipelineConfig().rerank_top

    def test_kpi_values_appear_in_provenance_contexts(self, sample_index, gateway):
        outcome = translate(IntentText(sampledata.INTENT_VR), sample_index, gateway)
        joined = "\n".join(c.text for c in outcome.contexts)
        for needle in ("100 Mbps", "RTT < 25 ms", "10^-3 (TCP) 10^-2 (UDP)", "-107 dBm", "2 dB"):
            assert needle in joined

    def test_empty_index(self, gateway):
        with pytest.raises(EmptyIndex):
            translate(IntentText("x"), VectorIndex(dimension=256), gateway)

    def test_end_to_end_determinism(self, sample_index, gateway):
        first = translate(IntentText(sampledata.INTENT_VR), sample_index, gateway)
        second = translate(IntentText(sampledata.INTENT_VR), sample_index, gateway)
        assert first.intent == second.intent
        assert first.contexts == second.contexts

    def test_unresolvable_intent_carries_no_contexts(self, sample_index, gateway):
        with pytest.raises(UnresolvableIntent) as excinfo:
            translate(IntentText("qqqq zzzz"), sample_index, gateway)
        assert excinfo.value.contexts == ()

    def test_bad_pipeline_config(self):
        with pytest.raises(BadParams):
            PipelineConfig(retrieve_k=2, rerank_top=5)
