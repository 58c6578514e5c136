"""Refine a generic application intent into a well-defined intent.

The knowledge base fixes the classification space: the scenario catalog is
extracted from the index with the domain instruction, and refinement then
classifies the user's intent against that closed catalog. A reply that maps
to no catalog entry is an error, never a silent fallback, because the
downstream retrieval query would otherwise be garbage.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field

from intent_gateway import prompts, textutil
from intent_gateway.errors import EmptyCatalog, EmptyIntent, UnresolvableIntent
from intent_gateway.gateway import ModelGateway
from intent_gateway.vectorstore import VectorIndex

logger = logging.getLogger(__name__)

CATALOG_RETRIEVE_K = 6


@dataclass(frozen=True)
class IntentText:
    text: str
    received_at: float = field(default_factory=time.time)

    def __post_init__(self):
        if not self.text.strip():
            raise EmptyIntent("intent text is empty")


@dataclass(frozen=True)
class DomainInstruction:
    text: str = prompts.DOMAIN_INSTRUCTION

    def __post_init__(self):
        if not self.text.strip():
            raise EmptyIntent("domain instruction is empty")


@dataclass(frozen=True)
class ScenarioCatalog:
    names: tuple[str, ...]

    def __post_init__(self):
        if not self.names:
            raise EmptyCatalog("catalog has no scenario names")

    def listing(self) -> str:
        return ", ".join(self.names)

    def match(self, candidate: str) -> str | None:
        """Canonical catalog spelling for *candidate*, or None."""
        key = textutil.normalize(candidate)
        for name in self.names:
            if textutil.normalize(name) == key:
                return name
        return None


@dataclass(frozen=True)
class WellDefinedIntent:
    scenario_type: str
    original_intent: IntentText


def parse_catalog_reply(reply: str) -> ScenarioCatalog:
    """Extract scenario names from a comma/line-separated model reply."""
    body = reply.strip()
    lowered = body.lower()
    prefix = "the list of supported service/traffic scenarios are"
    if lowered.startswith(prefix):
        body = body[len(prefix) :]
    names: list[str] = []
    seen: set[str] = set()
    for piece in body.replace("\n", ",").split(","):
        name = piece.strip().strip(".").strip()
        key = textutil.normalize(name)
        if not key or key == "etc":
            continue
        if key not in seen:
            seen.add(key)
            names.append(name)
    if not names:
        raise EmptyCatalog(f"no scenario names in reply {reply!r}")
    return ScenarioCatalog(names=tuple(names))


def build_catalog(
    index: VectorIndex,
    instruction: DomainInstruction,
    chat: ModelGateway,
    retrieve_k: int = CATALOG_RETRIEVE_K,
) -> ScenarioCatalog:
    """Query the knowledge base for the supported scenarios.

    Retrieves contexts for the domain instruction, asks the chat model to
    list the scenarios, and parses the reply into a deduplicated catalog.
    """
    query_vector = chat.embed_one(instruction.text)
    hits = index.query(query_vector, k=retrieve_k)
    contexts = [index.get(node_id).payload.original_text for node_id, _ in hits]
    prompt = prompts.catalog_prompt(instruction.text, "\n\n".join(contexts))
    reply = chat.chat("reasoning", prompt).text
    catalog = parse_catalog_reply(reply)
    logger.info("catalog built from index v%d: %s", index.version, catalog.names)
    return catalog


def assemble_refinement_prompt(intent: IntentText, catalog: ScenarioCatalog) -> str:
    return prompts.refinement_prompt(intent.text, catalog.listing())


def refine(intent: IntentText, catalog: ScenarioCatalog, chat: ModelGateway) -> WellDefinedIntent:
    """Classify the intent against the catalog via the reasoning model.

    The reply is normalized (optional "Scenario Type:" prefix stripped,
    case- and punctuation-insensitive comparison) and must match a catalog
    entry; the canonical catalog spelling is returned.
    """
    reply = chat.chat("reasoning", assemble_refinement_prompt(intent, catalog)).text
    candidate = reply.strip()
    lowered = candidate.lower()
    if lowered.startswith("scenario type"):
        candidate = candidate[len("scenario type") :].lstrip(" :").strip()
    matched = catalog.match(candidate)
    if matched is None:
        raise UnresolvableIntent(
            f"reply {reply!r} matches no catalog entry {list(catalog.names)}"
        )
    return WellDefinedIntent(scenario_type=matched, original_intent=intent)


class CatalogCache:
    """Caches the catalog per index version; rebuilt after each ingestion."""

    def __init__(self, instruction: DomainInstruction | None = None):
        self.instruction = instruction or DomainInstruction()
        self._version: int | None = None
        self._catalog: ScenarioCatalog | None = None

    def get(self, index: VectorIndex, chat: ModelGateway) -> ScenarioCatalog:
        if self._catalog is None or self._version != index.version:
            self._catalog = build_catalog(index, self.instruction, chat)
            self._version = index.version
        return self._catalog
