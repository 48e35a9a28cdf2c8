"""Fixture catalog loading: topological data, model fixtures and notes."""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
import logging
from pathlib import Path
from typing import Any

import yaml

from spindirac.index_bound import TopologicalData, as_lower_bound

logger = logging.getLogger(__name__)

CATALOG_RESOURCE = "catalog_v1.json"
_REQUIRED_TOPOLOGY_KEYS = {"name", "n", "a_hat", "alpha_nonzero", "label", "provenance", "justification"}
_REQUIRED_MODEL_KEYS = {"name", "kind", "parameters", "expected_kernel", "topology", "provenance"}
_REQUIRED_NOTE_KEYS = {"name", "genus_min", "genus_max", "statement", "provenance"}
_MODEL_KINDS = {"circle", "torus", "sphere", "surgery"}


@dataclass(frozen=True)
class TopologyFixture:
    data: TopologicalData
    provenance: str
    justification: str


@dataclass(frozen=True)
class ModelFixture:
    name: str
    kind: str
    parameters: dict[str, Any]
    expected_kernel: int
    topology: str
    provenance: str


@dataclass(frozen=True)
class Note:
    name: str
    genus_min: int
    genus_max: int | None
    statement: str
    provenance: str


@dataclass(frozen=True)
class Catalog:
    version: str
    topological: dict[str, TopologyFixture]
    models: tuple[ModelFixture, ...]
    notes: tuple[Note, ...]

    def model(self, name: str) -> ModelFixture:
        for fixture in self.models:
            if fixture.name == name:
                return fixture
        raise ValueError(f"Unknown model fixture: {name}")


def _read_catalog_text(path: str | Path | None) -> str:
    if path is None:
        resource = resources.files("spindirac.fixtures").joinpath(CATALOG_RESOURCE)
        return resource.read_text(encoding="utf-8")
    with Path(path).open("r", encoding="utf-8") as handle:
        return handle.read()


def _require_keys(entry: Any, required: set[str], what: str, idx: int) -> None:
    if not isinstance(entry, dict):
        raise ValueError(f"{what} #{idx} must be a mapping")
    missing = required - entry.keys()
    if missing:
        raise ValueError(f"{what} #{idx} is missing required keys: {sorted(missing)}")


def load_catalog(path: str | Path | None = None) -> Catalog:
    """Load and validate the fixture catalog; the packaged resource is the default."""
    data = yaml.safe_load(_read_catalog_text(path))
    if not isinstance(data, dict):
        raise ValueError("Fixture catalog must be a mapping")
    if "version" not in data:
        raise ValueError("Fixture catalog is missing required key: version")
    for key in ("topological", "models", "notes"):
        if not isinstance(data.get(key), list):
            raise ValueError(f"Fixture catalog is missing required list: {key}")

    topological: dict[str, TopologyFixture] = {}
    for idx, entry in enumerate(data["topological"], start=1):
        _require_keys(entry, _REQUIRED_TOPOLOGY_KEYS, "Topology fixture", idx)
        if not isinstance(entry["n"], int) or entry["n"] < 1:
            raise ValueError(f"Topology fixture #{idx} has invalid n: {entry['n']}")
        if not isinstance(entry["alpha_nonzero"], bool):
            raise ValueError(f"Topology fixture #{idx} has invalid alpha_nonzero; expected boolean")
        if entry["name"] in topological:
            raise ValueError(f"Topology fixture #{idx} repeats name: {entry['name']}")
        topological[entry["name"]] = TopologyFixture(
            data=TopologicalData(
                n=entry["n"],
                a_hat=int(entry["a_hat"]),
                alpha_nonzero=entry["alpha_nonzero"],
                label=str(entry["label"]),
            ),
            provenance=str(entry["provenance"]),
            justification=str(entry["justification"]),
        )

    models: list[ModelFixture] = []
    for idx, entry in enumerate(data["models"], start=1):
        _require_keys(entry, _REQUIRED_MODEL_KEYS, "Model fixture", idx)
        if entry["kind"] not in _MODEL_KINDS:
            raise ValueError(f"Model fixture #{idx} has invalid kind: {entry['kind']}")
        if entry["topology"] not in topological:
            raise ValueError(f"Model fixture #{idx} refers to unknown topology: {entry['topology']}")
        if not isinstance(entry["parameters"], dict):
            raise ValueError(f"Model fixture #{idx} has invalid parameters; expected mapping")
        models.append(
            ModelFixture(
                name=str(entry["name"]),
                kind=entry["kind"],
                parameters=dict(entry["parameters"]),
                expected_kernel=int(entry["expected_kernel"]),
                topology=entry["topology"],
                provenance=str(entry["provenance"]),
            )
        )

    notes: list[Note] = []
    for idx, entry in enumerate(data["notes"], start=1):
        _require_keys(entry, _REQUIRED_NOTE_KEYS, "Note", idx)
        notes.append(
            Note(
                name=str(entry["name"]),
                genus_min=int(entry["genus_min"]),
                genus_max=None if entry["genus_max"] is None else int(entry["genus_max"]),
                statement=str(entry["statement"]),
                provenance=str(entry["provenance"]),
            )
        )

    logger.debug("loaded fixture catalog v%s with %d models", data["version"], len(models))
    return Catalog(
        version=str(data["version"]),
        topological=topological,
        models=tuple(models),
        notes=tuple(notes),
    )


def topology_fixture(name: str, catalog: Catalog | None = None) -> TopologicalData:
    catalog = catalog or load_catalog()
    if name not in catalog.topological:
        raise ValueError(f"Unknown topology fixture: {name}")
    return catalog.topological[name].data


def fixture_lower_bound(name: str, catalog: Catalog | None = None) -> int:
    """Lower bound of a named topology fixture."""
    return as_lower_bound(topology_fixture(name, catalog))


def catalog_rows(catalog: Catalog) -> list[tuple[str, ...]]:
    """Flat rows (name, kind, lower_bound, provenance) for listing."""
    rows: list[tuple[str, ...]] = []
    for name, fixture in catalog.topological.items():
        rows.append((name, "topology", str(as_lower_bound(fixture.data)), fixture.provenance))
    for model in catalog.models:
        bound = as_lower_bound(catalog.topological[model.topology].data)
        rows.append((model.name, model.kind, str(bound), model.provenance))
    for note in catalog.notes:
        rows.append((note.name, "note", "", f"{note.provenance}: {note.statement}"))
    return rows
