"""Gateway configuration: model profiles, pipeline knobs, service limits.

Configuration loads from a JSON file and/or keyword overrides; the
GATEWAY_API_BASE and GATEWAY_API_KEY environment variables override the
file values for the remote backend.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, asdict
from pathlib import Path

from intent_gateway.errors import BadParams
from intent_gateway.gateway import (
    MockBackend,
    ModelGateway,
    ModelProfile,
    RemoteBackend,
    default_profiles,
)

PIPELINE_KINDS = ("intent_rag", "vanilla_rag", "no_rag")
DEFAULT_PIPELINE = "intent_rag"


@dataclass
class GatewayConfig:
    backend: str = "mock"  # mock | remote
    profiles: dict[str, ModelProfile] = field(default_factory=dict)
    index_path: str | None = None
    chunk_max_tokens: int = 128
    chunk_overlap: int = 10
    retrieve_k: int = 6
    rerank_top: int = 3
    vanilla_window: int = 3
    request_timeout_seconds: float = 30.0
    max_concurrent_requests: int = 4
    api_base: str | None = None
    api_key: str | None = None

    def __post_init__(self):
        if self.backend not in ("mock", "remote"):
            raise BadParams(f"unknown backend {self.backend!r}")
        if not self.profiles:
            self.profiles = default_profiles(self.backend)
        if not 1 <= self.rerank_top <= self.retrieve_k:
            raise BadParams(
                f"need 1 <= rerank_top <= retrieve_k, got {self.rerank_top}/{self.retrieve_k}"
            )
        if not 0 <= self.chunk_overlap < self.chunk_max_tokens:
            raise BadParams(
                f"need 0 <= overlap < max_tokens, got {self.chunk_overlap}/{self.chunk_max_tokens}"
            )

    def to_dict(self) -> dict:
        data = asdict(self)
        data["profiles"] = {kind: asdict(p) for kind, p in self.profiles.items()}
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "GatewayConfig":
        data = dict(data)
        profiles = {
            kind: ModelProfile(**profile) for kind, profile in data.pop("profiles", {}).items()
        }
        return cls(profiles=profiles, **data)

    @classmethod
    def from_file(cls, path) -> "GatewayConfig":
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise BadParams(f"cannot load config from {path}: {exc}") from exc
        config = cls.from_dict(data)
        config.apply_env_overrides()
        return config

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2), encoding="utf-8")

    def apply_env_overrides(self) -> None:
        base = os.environ.get("GATEWAY_API_BASE")
        key = os.environ.get("GATEWAY_API_KEY")
        if base:
            self.api_base = base
        if key:
            self.api_key = key

    def build_gateway(self) -> ModelGateway:
        remote = None
        if any(profile.backend == "remote" for profile in self.profiles.values()):
            remote = RemoteBackend(
                base_url=self.api_base,
                api_key=self.api_key,
                timeout_seconds=self.request_timeout_seconds,
                max_concurrent=self.max_concurrent_requests,
                embedding_model=self.profiles["embedding"].name,
            )
        return ModelGateway(
            profiles=self.profiles,
            mock_backend=MockBackend(),
            remote_backend=remote,
        )
