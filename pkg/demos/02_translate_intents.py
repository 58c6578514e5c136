"""Translate intents end to end: refine, retrieve, rerank, generate, validate.

Runs technical and non-technical intents through the full pipeline and
prints the structured result, the catalog classification, and provenance.
"""

import json

from intent_gateway import ModelGateway, IntentText, ingest_documents, sampledata, translate
from intent_gateway.refinement import DomainInstruction, build_catalog, refine

gateway = ModelGateway()
index = ingest_documents(sampledata.sample_documents(), gateway)

print("=== scenario catalog extracted from the knowledge base ===")
catalog = build_catalog(index, DomainInstruction(), gateway)
print(", ".join(catalog.names))

intents = [
    sampledata.INTENT_4K,                   # technical
    sampledata.INTENT_VR,                   # non-technical
    sampledata.INTENT_MOVIE,                # non-technical paraphrase
]

print("\n=== refinement: generic intent -> well-defined intent ===")
for text in intents:
    wdi = refine(IntentText(text), catalog, gateway)
    print(f"{text!r}\n   -> {wdi.scenario_type}")

print("\n=== full translation ===")
for text in intents:
    outcome = translate(IntentText(text), index, gateway, catalog=catalog)
    print(f"\nintent: {text}")
    print(f"pipeline took {outcome.duration_seconds * 1000:.1f} ms, "
          f"provenance={list(outcome.intent.provenance)}")
    print(json.dumps(outcome.intent.to_dict(), indent=2))
    if not outcome.report.valid:
        print("violations:", outcome.report.violations)
