"""Walk through knowledge-base construction step by step.

Shows what each ingestion stage produces for the bundled sample corpus:
modality chunks, token nodes, summaries, and finally the vector index.
"""

from intent_gateway import ModelGateway, sampledata
from intent_gateway.corpus import ingest_documents, load_document, split_text, summarize_chunk

gateway = ModelGateway()  # deterministic mock backend, no network needed
doc = sampledata.sample_documents()[0]

print("=== 1. modality separation ===")
chunks = load_document(doc)
for chunk in chunks:
    preview = " / ".join(chunk.content.strip().splitlines()[:2])
    print(f"chunk {chunk.id} [{chunk.modality}] {preview[:90]}")

print("\n=== 2. text splitting (chunk size 128, overlap 10) ===")
for chunk in chunks:
    if chunk.modality != "text":
        continue
    for node in split_text(chunk):
        print(f"node {node.id} tokens [{node.token_start}, {node.token_end})")

print("\n=== 3. summaries (search representation) ===")
for chunk in chunks:
    if chunk.modality == "image":
        continue
    summary = summarize_chunk(chunk, gateway)
    print(f"{chunk.id} [{chunk.modality}] title={summary.title!r}")
    print(f"   {summary.body[:100]}")

print("\n=== 4. embedding + indexing ===")
index = ingest_documents([doc], gateway)
print(f"index: {len(index)} entries, dimension {index.dimension}, version {index.version}")

print("\n=== 5. similarity search over summaries ===")
query = gateway.embed_one("3K Cloud VR (Game)")
for node_id, score in index.query(query, k=3):
    original = index.get(node_id).payload.original_text.strip().splitlines()[0]
    print(f"{score:0.3f} {node_id}: {original[:80]}")
