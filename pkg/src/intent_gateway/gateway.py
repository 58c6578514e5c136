"""Single access point for chat and embedding models.

Provides:
- ``ModelGateway``: dispatches requests to a backend per model profile
- ``MockBackend``: deterministic rule-table test double, runs every pipeline
  offline; replies are a pure function of the prompt
- ``RemoteBackend``: HTTP JSON client speaking the de-facto chat-completion
  and embedding wire format
- ``embed``: 256-dim hashed character-trigram embeddings on the mock path

Mock replies and embeddings are referentially transparent: identical inputs
produce byte-identical outputs, which the oracle tests rely on.
"""

from __future__ import annotations

import os
import re
import string
import threading
import time
from dataclasses import dataclass, field
from typing import Callable, Sequence

import httpx
import numpy as np

from intent_gateway import prompts, textutil
from intent_gateway.errors import BadParams, ModelError

MOCK_EMBED_DIM = 256

PROFILE_KINDS = ("reasoning", "instruction", "summarization", "embedding")

_UNIT_WORDS = {"mbps", "gbps", "ms", "dbm", "db", "fps"}

_FNV_OFFSET = 2166136261
_FNV_PRIME = 16777619
_FNV_MASK = 0xFFFFFFFF


@dataclass(frozen=True)
class ModelProfile:
    name: str
    kind: str  # reasoning | instruction | summarization | embedding
    backend: str = "mock"  # mock | remote


@dataclass(frozen=True)
class ChatRequest:
    profile: ModelProfile
    prompt: str
    temperature: float = 0.0
    max_output_tokens: int = 1024

    def __post_init__(self):
        if not self.prompt:
            raise BadParams("prompt must be non-empty")


@dataclass(frozen=True)
class ChatResponse:
    text: str
    model_name: str
    latency_seconds: float


@dataclass(frozen=True)
class MockRule:
    """One entry of the mock rule table; first matching rule wins."""

    name: str
    marker: str  # substring matched against the prompt; "" matches anything
    respond: Callable[[str], str]

    def matches(self, prompt: str) -> bool:
        return self.marker in prompt


@dataclass
class MockRuleTable:
    rules: list[MockRule] = field(default_factory=list)

    def reply(self, prompt: str) -> str:
        for rule in self.rules:
            if rule.matches(prompt):
                return rule.respond(prompt)
        # unreachable when the table carries its catch-all rule
        return UNKNOWN_REPLY


UNKNOWN_REPLY = "Scenario Type: UNKNOWN"

CATALOG_REPLY_PREFIX = "The list of supported service/traffic scenarios are "


def _between(text: str, start_marker: str, end_marker: str) -> str:
    lo = text.find(start_marker)
    if lo < 0:
        return ""
    lo += len(start_marker)
    hi = text.find(end_marker, lo)
    if hi < 0:
        return ""
    return text[lo:hi]


def _salient_tokens(text: str) -> list[str]:
    """Tokens worth echoing in a mock summary: numbers, units, proper nouns."""
    out = []
    for tok in textutil.tokens(text):
        bare = tok.strip(string.punctuation)
        if (
            any(ch.isdigit() for ch in tok)
            or bare.lower() in _UNIT_WORDS
            or tok[:1].isupper()
        ):
            out.append(bare if bare else tok)
    return out


def _grid_scenario_names(text: str) -> list[str]:
    """First-column values of grid data rows, deduplicated, in order."""
    names: list[str] = []
    seen: set[str] = set()
    for block in textutil.find_grid_blocks(text):
        for row in textutil.grid_data_rows(block):
            key = textutil.normalize(row[0])
            if key and key not in seen:
                seen.add(key)
                names.append(row[0])
    return names


def _respond_text_summary(prompt: str) -> str:
    chunk = _between(prompt, "summary of the text ", " and a title to it")
    words = textutil.tokens(chunk)
    body = " ".join(_salient_tokens(chunk)) or " ".join(words[:10])
    title = " ".join(words[:5])
    return f"Title: {title}\n{body}"


def _respond_table_summary(prompt: str) -> str:
    table = _between(prompt, "about what is this table ", " about?")
    names = _grid_scenario_names(table)
    if names:
        return ", ".join(names)
    return " ".join(textutil.tokens(table)[:10])


def _respond_catalog(prompt: str) -> str:
    return CATALOG_REPLY_PREFIX + ", ".join(_grid_scenario_names(prompt))


_FEW_SHOT_PAIR_RE = re.compile(r"intent:\s*([^.]+)\.\s*Service/traffic scenario:\s*([^.]+)\.")


def _respond_classification(prompt: str) -> str:
    intent = _between(prompt, "the following service demand ", " from the following list").strip()
    listing = _between(prompt, "from the following list ", ". Some examples are given below")
    entries = [e.strip() for e in listing.split(",") if e.strip()]
    norm_intent = textutil.normalize(intent)

    # In-context examples take precedence: an intent equal to a demonstrated
    # one is answered with the demonstrated scenario.
    for fs_intent, fs_scenario in _FEW_SHOT_PAIR_RE.findall(prompt):
        if textutil.normalize(fs_intent) == norm_intent:
            return f"Scenario Type : {fs_scenario.strip()}"

    for entry in entries:
        if textutil.normalize(entry) == norm_intent:
            return f"Scenario Type : {entry}"

    intent_tokens = textutil.token_set(intent)
    best = None
    best_overlap = 0
    for entry in entries:
        overlap = len(intent_tokens & textutil.token_set(entry))
        if overlap > best_overlap:
            best, best_overlap = entry, overlap
    if best is None:
        return UNKNOWN_REPLY
    return f"Scenario Type : {best}"


def _respond_generation(prompt: str) -> str:
    context = _between(
        prompt, "Provided the following context information", "Given only this information"
    ).strip()
    if context.endswith("."):
        context = context[:-1]
    scenario = _between(prompt, "to the scenario ", " in the following format").strip()
    target = textutil.normalize(scenario)
    for block in textutil.find_grid_blocks(context):
        header = textutil.grid_header(block)
        for row in textutil.grid_data_rows(block):
            if textutil.normalize(row[0]) == target:
                items = [f"{h}: {c}" for h, c in zip(header[1:], row[1:]) if c]
                return f"Scenario Type: {row[0]}, Key Performance Factors: " + ", ".join(items)
    return UNKNOWN_REPLY


def mock_rules_default() -> MockRuleTable:
    """Rule table sufficient to run ingestion, translation, and evaluation."""
    return MockRuleTable(
        rules=[
            MockRule("text_summary", prompts.MARKER_TEXT_SUMMARY, _respond_text_summary),
            MockRule("table_summary", prompts.MARKER_TABLE_SUMMARY, _respond_table_summary),
            MockRule("catalog_listing", prompts.MARKER_CATALOG, _respond_catalog),
            MockRule("classification", prompts.MARKER_CLASSIFICATION, _respond_classification),
            MockRule("structured_generation", prompts.MARKER_GENERATION, _respond_generation),
            MockRule("catch_all", "", lambda prompt: UNKNOWN_REPLY),
        ]
    )


def _fnv1a(data: bytes) -> int:
    h = _FNV_OFFSET
    for byte in data:
        h = ((h ^ byte) * _FNV_PRIME) & _FNV_MASK
    return h


def mock_embed_one(text: str) -> np.ndarray:
    """Hashed character-trigram bag, L2-normalized, dimension 256.

    Empty text maps to the all-zero vector; any non-empty text has unit norm.
    """
    vec = np.zeros(MOCK_EMBED_DIM, dtype=np.float64)
    lowered = text.lower()
    if lowered:
        if len(lowered) < 3:
            grams: Sequence[str] = (lowered,)
        else:
            grams = tuple(lowered[i : i + 3] for i in range(len(lowered) - 2))
        for gram in grams:
            vec[_fnv1a(gram.encode("utf-8")) % MOCK_EMBED_DIM] += 1.0
        vec /= np.linalg.norm(vec)
    return vec.astype(np.float32)


class MockBackend:
    """Offline test double: rule-table chat plus trigram embeddings."""

    def __init__(self, rules: MockRuleTable | None = None):
        self.rules = rules or mock_rules_default()

    def complete(self, request: ChatRequest) -> ChatResponse:
        start = time.perf_counter()
        text = self.rules.reply(request.prompt)
        return ChatResponse(
            text=text,
            model_name=request.profile.name,
            latency_seconds=time.perf_counter() - start,
        )

    def embed(self, texts: Sequence[str]) -> list[np.ndarray]:
        return [mock_embed_one(t) for t in texts]

    @property
    def embedding_dimension(self) -> int:
        return MOCK_EMBED_DIM


class RemoteBackend:
    """HTTP client for chat-completion and embedding endpoints.

    Base URL and API key default to the GATEWAY_API_BASE / GATEWAY_API_KEY
    environment variables. In-flight requests are capped by a semaphore.
    """

    def __init__(
        self,
        base_url: str | None = None,
        api_key: str | None = None,
        timeout_seconds: float = 30.0,
        max_concurrent: int = 4,
        embedding_model: str = "text-embedding-ada-002",
        transport=None,
    ):
        base_url = base_url or os.environ.get("GATEWAY_API_BASE", "")
        api_key = api_key if api_key is not None else os.environ.get("GATEWAY_API_KEY", "")
        if not base_url:
            raise BadParams("remote backend requires a base URL (GATEWAY_API_BASE)")
        headers = {}
        if api_key:
            headers["Authorization"] = f"Bearer {api_key}"
        self._client = httpx.Client(
            base_url=base_url,
            headers=headers,
            timeout=timeout_seconds,
            transport=transport,
        )
        self._semaphore = threading.Semaphore(max_concurrent)
        self.embedding_model = embedding_model
        self._embedding_dimension: int | None = None

    def _post(self, path: str, payload: dict) -> dict:
        with self._semaphore:
            try:
                response = self._client.post(path, json=payload)
                response.raise_for_status()
                return response.json()
            except httpx.HTTPError as exc:
                raise ModelError(f"remote model call failed: {exc}") from exc

    def complete(self, request: ChatRequest) -> ChatResponse:
        start = time.perf_counter()
        data = self._post(
            "/chat/completions",
            {
                "model": request.profile.name,
                "messages": [{"role": "user", "content": request.prompt}],
                "temperature": request.temperature,
                "max_tokens": request.max_output_tokens,
            },
        )
        try:
            text = data["choices"][0]["message"]["content"]
        except (KeyError, IndexError, TypeError) as exc:
            raise ModelError(f"malformed completion response: {data!r}") from exc
        return ChatResponse(
            text=text,
            model_name=request.profile.name,
            latency_seconds=time.perf_counter() - start,
        )

    def embed(self, texts: Sequence[str]) -> list[np.ndarray]:
        data = self._post("/embeddings", {"model": self.embedding_model, "input": list(texts)})
        try:
            rows = sorted(data["data"], key=lambda item: item["index"])
            vectors = [np.asarray(row["embedding"], dtype=np.float32) for row in rows]
        except (KeyError, TypeError) as exc:
            raise ModelError(f"malformed embedding response: {data!r}") from exc
        normalized = []
        for vec in vectors:
            norm = float(np.linalg.norm(vec))
            normalized.append(vec / norm if norm > 0 else vec)
        if normalized and self._embedding_dimension is None:
            self._embedding_dimension = int(normalized[0].shape[0])
        return normalized

    @property
    def embedding_dimension(self) -> int:
        if self._embedding_dimension is None:
            self._embedding_dimension = int(self.embed(["probe"])[0].shape[0])
        return self._embedding_dimension


def default_profiles(backend: str = "mock") -> dict[str, ModelProfile]:
    if backend == "mock":
        names = {kind: f"mock-{kind}" for kind in PROFILE_KINDS}
    else:
        names = {
            "reasoning": "o1-mini",
            "instruction": "gpt-3.5-turbo-instruct",
            "summarization": "gpt-3.5-turbo-instruct",
            "embedding": "text-embedding-ada-002",
        }
    return {kind: ModelProfile(names[kind], kind, backend) for kind in PROFILE_KINDS}


class ModelGateway:
    """Routes chat and embedding calls to the backend each profile names.

    Shareable across threads: the mock backend is stateless and the remote
    backend guards its connection pool with a semaphore.
    """

    def __init__(
        self,
        profiles: dict[str, ModelProfile] | None = None,
        mock_backend: MockBackend | None = None,
        remote_backend: RemoteBackend | None = None,
    ):
        self.profiles = profiles or default_profiles("mock")
        self._mock = mock_backend or MockBackend()
        self._remote = remote_backend

    def profile(self, kind: str) -> ModelProfile:
        try:
            return self.profiles[kind]
        except KeyError:
            raise BadParams(f"no profile configured for kind {kind!r}") from None

    def _backend(self, profile: ModelProfile):
        if profile.backend == "mock":
            return self._mock
        if self._remote is None:
            raise BadParams(f"profile {profile.name!r} wants a remote backend but none is configured")
        return self._remote

    def complete(self, request: ChatRequest) -> ChatResponse:
        return self._backend(request.profile).complete(request)

    def chat(self, kind: str, prompt: str, **kwargs) -> ChatResponse:
        return self.complete(ChatRequest(profile=self.profile(kind), prompt=prompt, **kwargs))

    def embed(self, texts: Sequence[str]) -> list[np.ndarray]:
        return self._backend(self.profile("embedding")).embed(texts)

    def embed_one(self, text: str) -> np.ndarray:
        return self.embed([text])[0]

    @property
    def embedding_dimension(self) -> int:
        return self._backend(self.profile("embedding")).embedding_dimension
