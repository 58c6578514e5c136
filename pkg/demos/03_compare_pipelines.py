"""Compare intent-RAG, vanilla-RAG, and no-RAG on the sample dataset.

Prints the six metric means per pipeline plus mean translation time, and
saves a bar chart when matplotlib is available.
"""

from intent_gateway import ModelGateway, ingest_documents, sampledata
from intent_gateway.baselines import vanilla_ingest
from intent_gateway.evaluation import METRIC_NAMES, DatasetRecord, run_eval

gateway = ModelGateway()
docs = sampledata.sample_documents()
dataset = [DatasetRecord(r["intent"], r["ground_truth"]) for r in sampledata.SAMPLE_DATASET]

report = run_eval(
    dataset,
    pipelines=("vanilla_rag", "intent_rag", "no_rag"),
    index_builders={
        "intent_rag": lambda: ingest_documents(docs, gateway),
        "vanilla_rag": lambda: vanilla_ingest(docs, gateway),
    },
    gateway=gateway,
)

kinds = list(report.pipelines)
print(f"{'metric':<24}" + "".join(f"{kind:>14}" for kind in kinds))
for metric in METRIC_NAMES:
    row = ""
    for kind in kinds:
        value = report.pipelines[kind].metric_means[metric]
        row += f"{value:>14.3f}" if value is not None else f"{'-':>14}"
    print(f"{metric:<24}" + row)
print(
    f"{'mean duration (s)':<24}"
    + "".join(f"{report.pipelines[kind].mean_duration_seconds:>14.4f}" for kind in kinds)
)
print(
    f"{'failures':<24}"
    + "".join(f"{report.pipelines[kind].n_failures:>14d}" for kind in kinds)
)

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    import numpy as np

    x = np.arange(len(METRIC_NAMES))
    width = 0.27
    fig, ax = plt.subplots(figsize=(10, 4.5))
    for offset, kind in enumerate(kinds):
        values = [report.pipelines[kind].metric_means[m] or 0.0 for m in METRIC_NAMES]
        ax.bar(x + (offset - 1) * width, values, width, label=kind)
    ax.set_xticks(x, METRIC_NAMES, rotation=20, ha="right")
    ax.set_ylim(0, 1.05)
    ax.set_ylabel("mean score")
    ax.legend()
    fig.tight_layout()
    fig.savefig("pipeline_comparison.png", dpi=120)
    print("\nchart saved to pipeline_comparison.png")
except ImportError:
    print("\n(matplotlib not installed; skipping the chart)")
