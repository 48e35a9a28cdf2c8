"""Artifact rendering: CSV tables, run headers and atomic writes."""

from __future__ import annotations

import csv
import io
import json
import os
from pathlib import Path
import tempfile
from typing import Any, Iterable, Sequence

from spindirac.config import TOOL_NAME
from spindirac.fingerprint import canonical_json, config_fingerprint
from spindirac.version import __version__

# Destination paths are excluded from the embedded config and the fingerprint.
_PATH_KEYS = ("output_path", "json_output_path", "eigen_dump_path")
_HEADER_PREFIX = f"# {TOOL_NAME} "


def artifact_config(config: dict) -> dict:
    """Resolved config as embedded in artifacts."""
    return {key: value for key, value in config.items() if key not in _PATH_KEYS}


def tool_string() -> str:
    return f"{TOOL_NAME} {__version__}"


def run_header(config: dict) -> str:
    """One comment line carrying the tool version, run id and resolved config."""
    embedded = artifact_config(config)
    run_id = config_fingerprint(embedded)["run_id"]
    return f"{_HEADER_PREFIX}{__version__} run_id={run_id} config={canonical_json(embedded)}\n"


def read_embedded_config(text: str) -> dict:
    """Recover the resolved config from an artifact written by this tool."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        document = json.loads(stripped)
        if not isinstance(document, dict) or not isinstance(document.get("config"), dict):
            raise ValueError("JSON artifact carries no embedded config")
        return document["config"]
    for line in text.splitlines():
        if not line.startswith("#"):
            break
        if line.startswith(_HEADER_PREFIX) and " config=" in line:
            return json.loads(line.split(" config=", 1)[1])
    raise ValueError("Artifact carries no embedded config header")


def render_csv(columns: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow(row)
    return buffer.getvalue()


def with_header(config: dict, body: str) -> str:
    return run_header(config) + body


def json_document(config: dict, payload: dict) -> str:
    """JSON mirror: payload plus tool, run id and embedded config, sorted and indented."""
    embedded = artifact_config(config)
    document = {
        "tool": tool_string(),
        "run_id": config_fingerprint(embedded)["run_id"],
        "config": embedded,
        **payload,
    }
    return json.dumps(document, indent=2, sort_keys=True) + "\n"


def write_artifact(path: str | Path, text: str) -> Path:
    """Write text through a temporary file in the target directory, then rename."""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix=f".{target.name}.", suffix=".tmp", dir=target.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        os.replace(tmp_name, target)
    except BaseException:
        Path(tmp_name).unlink(missing_ok=True)
        raise
    return target
