"""Schema loading and validation for run configurations and sweep reports."""

from __future__ import annotations

from functools import lru_cache
from importlib import resources
import json

import jsonschema

RUN_CONFIG_SCHEMA = "run_config.schema.json"
SWEEP_REPORT_SCHEMA = "sweep_report.schema.json"


@lru_cache(maxsize=None)
def load_schema(name: str) -> dict:
    """Load and return a packaged JSON schema by file name."""
    schema_path = resources.files("spindirac.schemas").joinpath(name)
    with schema_path.open("r", encoding="utf-8") as handle:
        return json.load(handle)


def _validate(data: dict, name: str) -> None:
    validator = jsonschema.Draft202012Validator(load_schema(name))
    errors = sorted(validator.iter_errors(data), key=lambda err: [str(part) for part in err.path])
    if errors:
        first = errors[0]
        path = ".".join(str(part) for part in first.path) or "<root>"
        raise ValueError(f"Schema validation failed at {path}: {first.message}")


def validate_run_config(config: dict) -> None:
    """Validate a run configuration before any computation.

    Raises:
        ValueError: If the configuration does not conform to the schema.
    """
    _validate(config, RUN_CONFIG_SCHEMA)


def validate_sweep_report(document: dict) -> None:
    """Validate a neck-sweep JSON document.

    Raises:
        ValueError: If the document does not conform to the schema.
    """
    _validate(document, SWEEP_REPORT_SCHEMA)
