"""Service configuration from environment variables or a JSON file.

Set ``SIDECAR_CONFIG`` to a JSON file path to load settings from disk;
individual environment variables override file values. The transformer
backend pins its checkpoint by name plus exact revision so the service's
vectors are reproducible across deployments; the hash backend needs no
weights at all and is the default for development and CI.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, fields
from pathlib import Path

ENV_PREFIX = "SIDECAR_"


@dataclass(frozen=True)
class SidecarConfig:
    backend: str = "hash"  # "hash" or "transformer"
    model_name: str = "sentence-transformers/all-MiniLM-L6-v2"
    model_revision: str = "c9745ed1d9f207416be6d2e6f8de32d1f16199bf"
    dimension: int = 64  # hash backend only; transformers report their own
    max_tokens: int = 256
    seed: int = 0  # hash backend only
    pooled_default: bool = False
    host: str = "127.0.0.1"
    port: int = 8901

    @classmethod
    def load(cls, env: dict[str, str] | None = None) -> "SidecarConfig":
        env = os.environ if env is None else env
        values: dict = {}
        config_path = env.get(ENV_PREFIX + "CONFIG")
        if config_path:
            values.update(json.loads(Path(config_path).read_text(encoding="utf-8")))
        for field in fields(cls):
            raw = env.get(ENV_PREFIX + field.name.upper())
            if raw is None:
                continue
            if field.type == "int":
                values[field.name] = int(raw)
            elif field.type == "bool":
                values[field.name] = raw.strip().lower() in ("1", "true", "yes", "on")
            else:
                values[field.name] = raw
        config = cls(**values)
        if config.backend not in ("hash", "transformer"):
            raise ValueError(f"backend must be 'hash' or 'transformer', got {config.backend!r}")
        return config
