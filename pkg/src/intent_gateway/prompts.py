"""Prompt templates used by the translation pipelines.

The wording of these templates is part of the pipeline contract: the mock
model backend recognizes prompts by characteristic substrings, and the
refinement/generation stages substitute into the ``{...}`` slots via
:func:`intent_gateway.textutil.fill` (single pass, injection-safe).
"""

from intent_gateway.textutil import fill

DOMAIN_INSTRUCTION = (
    "Please list all the service/traffic scenarios that can be provided to our customers"
)

TEXT_SUMMARY_TEMPLATE = (
    "You are an assistant tasked with summarizing text. "
    "Give a concise summary of the text {chunk} and a title to it. "
    "Please provide the summary in a string format."
)

TABLE_SUMMARY_TEMPLATE = (
    "You are an assistant tasked with summarizing tables. "
    "Give a very concise summary about what is this table {table} about? "
    "Please provide the summary in a string format."
)

CATALOG_TEMPLATE = "{instruction}\n\nContext:\n{context}"

REFINEMENT_TEMPLATE = (
    "You are an expert network service provider who can predict the service/traffic "
    "scenario demanded by network users. Predict the most relevant service/traffic "
    "scenario requesting the following service demand {intent} from the following "
    "list {catalog}. Some examples are given below: "
    "intent: 4K On Demand Video. Service/traffic scenario: 4K On Demand Video. "
    "intent: I want internet access with fast browsing service in the airoplane. "
    "Service/traffic scenario: Airplanes connectivity. "
    "Write a clear and conscious output giving only the chosen service/traffic "
    "scenario. Do not put any introductory phrases, commentary, or explanations."
)

# Generalizes the layout of the ground-truth rows; stands in for the full
# SDO information model.
OUTPUT_FORMAT = (
    "Scenario Type: <scenario name>, Key Performance Factors: "
    "<factor name>: <value> <unit>, <factor name>: <value> <unit>, ..."
)

GENERATION_CONTEXT_SENTENCE = "Provided the following context information {context}. "

GENERATION_TEMPLATE = (
    "{context_sentence}"
    "Given only this information, Please provide the performance recommendations "
    "metrics and their values to the scenario {scenario} in the following format "
    "{format}. Some examples are given below: "
    "Scenario Type: 4K On Demand Video, Key Performance Factors: "
    "Data Rate/Throughput (downlink): 30 Mbps, Delay: RTT < 100 ms, "
    "Packet Loss Rate: 10^-3, Resolution: 4K, Coverage Level CSI RSRP: -113 dBm, "
    "Coverage Quality CSI SINR: -2 dB."
)

# Substring matchers the mock backend dispatches on.
MARKER_TEXT_SUMMARY = "tasked with summarizing text"
MARKER_TABLE_SUMMARY = "tasked with summarizing tables"
MARKER_CATALOG = "list all the service/traffic scenarios"
MARKER_CLASSIFICATION = "Predict the most relevant service/traffic scenario"
MARKER_GENERATION = "performance recommendations metrics"


def text_summary_prompt(chunk_text: str) -> str:
    return fill(TEXT_SUMMARY_TEMPLATE, {"chunk": chunk_text})


def table_summary_prompt(table_text: str) -> str:
    return fill(TABLE_SUMMARY_TEMPLATE, {"table": table_text})


def catalog_prompt(instruction: str, context: str) -> str:
    return fill(CATALOG_TEMPLATE, {"instruction": instruction, "context": context})


def refinement_prompt(intent_text: str, catalog_listing: str) -> str:
    return fill(REFINEMENT_TEMPLATE, {"catalog": catalog_listing, "intent": intent_text})


def generation_prompt(context: str | None, scenario: str) -> str:
    """Generation prompt; ``context=None`` omits the context sentence (no-RAG)."""
    if context is None:
        context_sentence = ""
    else:
        context_sentence = fill(GENERATION_CONTEXT_SENTENCE, {"context": context})
    return fill(
        GENERATION_TEMPLATE,
        {
            "context_sentence": context_sentence,
            "format": OUTPUT_FORMAT,
            "scenario": scenario,
        },
    )
