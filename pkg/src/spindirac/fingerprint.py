"""Stable fingerprinting helpers for resolved run configurations."""

from __future__ import annotations

import hashlib
import json


def canonical_json(payload: dict) -> str:
    """Serialise a payload with sorted keys and compact separators."""
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def config_fingerprint(config: dict) -> dict[str, str]:
    """Build a stable fingerprint payload for a resolved run configuration."""
    stable_key = hashlib.sha256(canonical_json(config).encode("utf-8")).hexdigest()
    command = str(config.get("command", "run"))
    return {"stable_key": stable_key, "run_id": f"{command}:{stable_key[:12]}"}
