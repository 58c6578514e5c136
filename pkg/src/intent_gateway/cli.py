"""Command-line workflows: ingest, translate, evaluate, compare, serve.

Usage errors exit with code 2 (argparse convention); runtime failures print
a diagnostic to stderr and exit with code 1.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from intent_gateway import evaluation, sampledata, vectorstore
from intent_gateway.baselines import norag_translate, vanilla_ingest, vanilla_translate
from intent_gateway.config import DEFAULT_PIPELINE, PIPELINE_KINDS, GatewayConfig
from intent_gateway.corpus import ingest_documents, read_manifest
from intent_gateway.errors import IntentGatewayError
from intent_gateway.intents import FreeTextAnswer
from intent_gateway.refinement import IntentText
from intent_gateway.structuring import translate

logger = logging.getLogger(__name__)


def _load_config(args) -> GatewayConfig:
    if getattr(args, "config", None):
        return GatewayConfig.from_file(args.config)
    config = GatewayConfig()
    config.apply_env_overrides()
    return config


def _outcome_json(outcome) -> str:
    if isinstance(outcome.answer, FreeTextAnswer):
        body = {"pipeline": outcome.pipeline, "answer_text": outcome.answer.text}
    else:
        body = {"pipeline": outcome.pipeline}
        body.update(outcome.answer.to_dict())
        body["violations"] = list(outcome.report.violations) if outcome.report else []
    body["duration_seconds"] = outcome.duration_seconds
    return json.dumps(body, indent=2, ensure_ascii=False)


def cmd_ingest(args) -> int:
    config = _load_config(args)
    gateway = config.build_gateway()
    docs = read_manifest(args.manifest)
    index = ingest_documents(
        docs, gateway, max_tokens=config.chunk_max_tokens, overlap=config.chunk_overlap
    )
    vectorstore.persist(index, args.out)
    print(f"ingested {len(docs)} documents -> {len(index)} entries -> {args.out}")
    return 0


def cmd_translate(args) -> int:
    config = _load_config(args)
    gateway = config.build_gateway()
    intent = IntentText(args.intent)
    if args.pipeline == "no_rag":
        outcome = norag_translate(intent, gateway)
    elif args.pipeline == "vanilla_rag":
        if not args.manifest:
            print("error: vanilla_rag needs --manifest to build its index", file=sys.stderr)
            return 1
        index = vanilla_ingest(read_manifest(args.manifest), gateway, window=config.vanilla_window)
        outcome = vanilla_translate(intent, index, gateway)
    else:
        if not args.index or not Path(args.index).exists():
            print(f"error: index not found: {args.index}", file=sys.stderr)
            return 1
        index = vectorstore.load(args.index)
        outcome = translate(intent, index, gateway)
    print(_outcome_json(outcome))
    return 0


def _builders(args, config, gateway, pipelines):
    builders = {}
    if "intent_rag" in pipelines:
        if args.index:
            builders["intent_rag"] = lambda: vectorstore.load(args.index)
        elif args.manifest:
            builders["intent_rag"] = lambda: ingest_documents(
                read_manifest(args.manifest),
                gateway,
                max_tokens=config.chunk_max_tokens,
                overlap=config.chunk_overlap,
            )
        else:
            raise IntentGatewayError("intent_rag needs --index or --manifest")
    if "vanilla_rag" in pipelines:
        if not args.manifest:
            raise IntentGatewayError("vanilla_rag needs --manifest (raw documents)")
        builders["vanilla_rag"] = lambda: vanilla_ingest(
            read_manifest(args.manifest), gateway, window=config.vanilla_window
        )
    return builders


def cmd_evaluate(args) -> int:
    config = _load_config(args)
    gateway = config.build_gateway()
    dataset = evaluation.load_dataset(args.dataset)
    pipelines = tuple(args.pipelines)
    report = evaluation.run_eval(
        dataset,
        pipelines=pipelines,
        index_builders=_builders(args, config, gateway, pipelines),
        gateway=gateway,
    )
    payload = report.to_json()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(payload + "\n")
        print(f"report written to {args.out}")
    else:
        print(payload)
    return 0


def cmd_compare(args) -> int:
    config = _load_config(args)
    gateway = config.build_gateway()
    dataset = evaluation.load_dataset(args.dataset)
    pipelines = ("vanilla_rag", "intent_rag", "no_rag")
    report = evaluation.run_eval(
        dataset,
        pipelines=pipelines,
        index_builders=_builders(args, config, gateway, pipelines),
        gateway=gateway,
    )
    width = max(len(name) for name in evaluation.METRIC_NAMES + ("mean_duration_seconds",))
    header = " ".join(f"{kind:>22}" for kind in pipelines)
    print(f"{'metric':<{width}} {header}")
    for metric in evaluation.METRIC_NAMES:
        cells = []
        for kind in pipelines:
            value = report.pipelines[kind].metric_means.get(metric)
            cells.append(f"{value:>22.4f}" if value is not None else f"{'-':>22}")
        print(f"{metric:<{width}} {' '.join(cells)}")
    durations = " ".join(
        f"{report.pipelines[kind].mean_duration_seconds:>22.4f}" for kind in pipelines
    )
    print(f"{'mean_duration_seconds':<{width}} {durations}")
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(report.to_csv())
        print(f"csv written to {args.csv}")
    return 0


def cmd_serve(args) -> int:
    from intent_gateway.service import serve

    config = _load_config(args)
    if args.index:
        config.index_path = args.index
    serve(config, host=args.host, port=args.port)
    return 0


def cmd_sample_corpus(args) -> int:
    manifest, dataset = sampledata.write_sample_corpus(args.out)
    print(f"manifest: {manifest}\ndataset: {dataset}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="intent-gateway",
        description="Translate application intents into structured network intents.",
    )
    parser.add_argument("--config", help="path to a JSON gateway config")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="build and persist the knowledge index from a manifest")
    p.add_argument("--manifest", required=True, help="one 'path[,format_hint]' per line")
    p.add_argument("--out", required=True, help="index file to write")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("translate", help="translate one intent and print the JSON")
    p.add_argument("intent", help="intent text")
    p.add_argument("--index", help="persisted index file (intent_rag)")
    p.add_argument("--manifest", help="manifest for building the vanilla index")
    p.add_argument("--pipeline", choices=PIPELINE_KINDS, default=DEFAULT_PIPELINE)
    p.set_defaults(func=cmd_translate)

    p = sub.add_parser("evaluate", help="score a dataset and write the report")
    p.add_argument("--dataset", required=True, help="JSONL with intent/ground_truth records")
    p.add_argument("--index", help="persisted index file for intent_rag")
    p.add_argument("--manifest", help="manifest for building indexes from documents")
    p.add_argument("--out", help="write the JSON report here instead of stdout")
    p.add_argument(
        "--pipelines", nargs="+", choices=PIPELINE_KINDS, default=list(PIPELINE_KINDS)
    )
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("compare", help="run all three pipelines and print the metric table")
    p.add_argument("--dataset", required=True)
    p.add_argument("--index", help="persisted index file for intent_rag")
    p.add_argument("--manifest", help="manifest for building indexes from documents")
    p.add_argument("--csv", help="also write the plot-ready CSV table here")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("serve", help="start the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8080)
    p.add_argument("--index", help="persisted index file to serve")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("sample-corpus", help="write the bundled sample corpus and dataset")
    p.add_argument("--out", default="sample-corpus", help="target directory")
    p.set_defaults(func=cmd_sample_corpus)

    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except IntentGatewayError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
