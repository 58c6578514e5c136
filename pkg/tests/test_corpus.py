import pytest
from hypothesis import given, settings, strategies as st

from intent_gateway.corpus import (
    ModalityChunk,
    RawDocument,
    ingest_documents,
    load_document,
    read_manifest,
    split_text,
    summarize_chunk,
)
from intent_gateway.errors import BadParams, EmptyDocument, UnsupportedModality


def make_text_chunk(n_tokens: int) -> ModalityChunk:
    return ModalityChunk(
        id="d:0",
        doc_id="d",
        modality="text",
        content=" ".join(f"w{i}" for i in range(n_tokens)),
        order_index=0,
    )


class TestLoadDocument:
    def test_paragraph_plus_table(self):
        doc = RawDocument(
            id="d",
            text="A paragraph about services.\nRate | Value\nVideo | 30 Mbps\n",
        )
        chunks = load_document(doc)
        assert [c.modality for c in chunks] == ["text", "table"]
        assert chunks[0].order_index == 0 and chunks[1].order_index == 1
        assert "Video | 30 Mbps" in chunks[1].content

    def test_table_only_document(self):
        doc = RawDocument(
            id="d",
            text=(
                "Scenario Type | Data Rate | Delay\n"
                "4K On Demand Video | 30 Mbps | RTT < 100 ms"
            ),
        )
        chunks = load_document(doc)
        assert len(chunks) == 1
        assert chunks[0].modality == "table"
        assert chunks[0].content.splitlines()[1].startswith("4K On Demand Video")

    def test_empty_document_rejected(self):
        with pytest.raises(EmptyDocument):
            load_document(RawDocument(id="d", text="   \n "))

    def test_partition_reconstructs_document(self):
        doc = RawDocument(
            id="d",
            text="Intro text.\n\na | b\nc | d\n\nTail text.\nx | lonely line\nEnd.",
        )
        chunks = load_document(doc)
        assert "".join(c.content for c in chunks) == doc.text
        assert [c.order_index for c in chunks] == list(range(len(chunks)))

    def test_single_grid_line_stays_text(self):
        doc = RawDocument(id="d", text="before\nalpha | beta\nafter")
        assert [c.modality for c in load_document(doc)] == ["text"]

    def test_markdown_image_reference_chunk(self):
        doc = RawDocument(
            id="d",
            text="Some text.\n![diagram](figs/arch.png)\nMore text.",
            format_hint="markdown-like",
        )
        chunks = load_document(doc)
        assert [c.modality for c in chunks] == ["text", "image", "text"]
        assert chunks[1].content.strip() == "![diagram](figs/arch.png)"

    def test_unknown_format_hint(self):
        with pytest.raises(BadParams):
            load_document(RawDocument(id="d", text="x", format_hint="pdf"))

    def test_pre_segmented_splits_at_blank_lines(self):
        doc = RawDocument(
            id="d",
            text="First block line one.\nStill first.\n\nSecond block.\n\nThird block.",
            format_hint="pre-segmented",
        )
        chunks = load_document(doc)
        assert [c.modality for c in chunks] == ["text", "text", "text"]
        assert chunks[0].content.startswith("First block")
        assert chunks[1].content.startswith("Second block")
        assert "".join(c.content for c in chunks) == doc.text

    def test_plain_hint_keeps_blank_lines_in_one_chunk(self):
        doc = RawDocument(id="d", text="One block.\n\nSame chunk still.")
        assert len(load_document(doc)) == 1

    @settings(max_examples=200)
    @given(
        lines=st.lists(
            st.sampled_from(
                (
                    "Prose about the network.",
                    "Another plain sentence.",
                    "",
                    "name | value",
                    "other | cell | text",
                    "left\tright",
                )
            ),
            min_size=1,
            max_size=20,
        )
    )
    def test_partition_property_random_documents(self, lines):
        text = "\n".join(lines)
        if not text.strip():
            return
        chunks = load_document(RawDocument(id="d", text=text))
        assert "".join(c.content for c in chunks) == text
        assert [c.order_index for c in chunks] == list(range(len(chunks)))
        for chunk in chunks:
            grid_lines = [l for l in chunk.content.splitlines() if "|" in l or "\t" in l]
            if chunk.modality == "table":
                assert len(grid_lines) >= 2
                assert grid_lines == chunk.content.splitlines()


class TestSplitText:
    def test_single_window(self):
        nodes = split_text(make_text_chunk(100))
        assert len(nodes) == 1
        assert (nodes[0].token_start, nodes[0].token_end) == (0, 100)

    def test_two_windows_with_overlap(self):
        # stride = 128 - 10 = 118, so 246 tokens split as [0,128) and [118,246)
        nodes = split_text(make_text_chunk(246))
        assert [(n.token_start, n.token_end) for n in nodes] == [(0, 128), (118, 246)]

    def test_rejects_table_chunk(self):
        chunk = ModalityChunk(id="d:0", doc_id="d", modality="table", content="a | b", order_index=0)
        with pytest.raises(UnsupportedModality):
            split_text(chunk)

    def test_rejects_bad_overlap(self):
        with pytest.raises(BadParams):
            split_text(make_text_chunk(10), max_tokens=8, overlap=8)

    @settings(max_examples=200)
    @given(
        n_tokens=st.integers(min_value=1, max_value=600),
        max_tokens=st.integers(min_value=1, max_value=128),
        overlap=st.integers(min_value=0, max_value=127),
    )
    def test_splitter_postconditions(self, n_tokens, max_tokens, overlap):
        if overlap >= max_tokens:
            overlap = max_tokens - 1
        nodes = split_text(make_text_chunk(n_tokens), max_tokens=max_tokens, overlap=overlap)
        stride = max_tokens - overlap
        assert nodes[0].token_start == 0
        assert nodes[-1].token_end == n_tokens
        for i, node in enumerate(nodes):
            assert node.token_start == i * stride
            assert node.token_end - node.token_start <= max_tokens
            assert node.token_end > node.token_start
            assert node.text
        for a, b in zip(nodes, nodes[1:]):
            assert a.token_end - b.token_start == overlap  # shared tokens
            assert b.token_start <= a.token_end  # coverage has no gaps


class TestSummarize:
    def test_table_summary_lists_scenario_names(self, gateway):
        chunk = ModalityChunk(
            id="d:0",
            doc_id="d",
            modality="table",
            content=(
                "Scenario Type | Rate\n4K On Demand Video | 30 Mbps\n3K Cloud VR (Game) | 100 Mbps"
            ),
            order_index=0,
        )
        summary = summarize_chunk(chunk, gateway)
        assert summary.body == "4K On Demand Video, 3K Cloud VR (Game)"
        assert summary.title == ""

    def test_text_summary_echoes_salient_tokens(self, gateway):
        chunk = ModalityChunk(
            id="d:0",
            doc_id="d",
            modality="text",
            content="4K video requires 30 Mbps downlink.",
            order_index=0,
        )
        summary = summarize_chunk(chunk, gateway)
        assert "30 Mbps" in summary.body
        assert summary.title  # text prompt asks for a title

    def test_image_chunk_unsupported(self, gateway):
        chunk = ModalityChunk(
            id="d:0", doc_id="d", modality="image", content="![x](y.png)", order_index=0
        )
        with pytest.raises(UnsupportedModality):
            summarize_chunk(chunk, gateway)


class TestIngest:
    def test_ingest_indexes_tables_and_text(self, sample_docs, gateway):
        index = ingest_documents(sample_docs, gateway)
        modalities = {node.payload.modality for node in index.nodes}
        assert modalities == {"text", "table"}
        # every entry embeds the chunk summary and keeps the original
        for node in index.nodes:
            assert node.payload.summary_text
            assert node.payload.original_text

    def test_image_chunks_not_indexed(self, gateway):
        doc = RawDocument(
            id="d",
            text="Prose here.\n![fig](a.png)\nMore prose.",
            format_hint="markdown-like",
        )
        index = ingest_documents([doc], gateway)
        assert all(node.payload.modality != "image" for node in index.nodes)

    def test_read_manifest(self, tmp_path):
        (tmp_path / "doc.md").write_text("Some text.", encoding="utf-8")
        manifest = tmp_path / "manifest.txt"
        manifest.write_text("doc.md,markdown-like\n# comment\n", encoding="utf-8")
        docs = read_manifest(manifest)
        assert len(docs) == 1
        assert docs[0].id == "doc"
        assert docs[0].format_hint == "markdown-like"
        assert docs[0].text == "Some text."
