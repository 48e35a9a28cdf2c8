"""Eigenvalue tables with multiplicities and their CSV form."""

from __future__ import annotations

import csv
from dataclasses import dataclass
import io
import math
from typing import Iterable

import numpy as np

from spindirac.config import EXACT_MERGE_TOL

CSV_COLUMNS = ("eigenvalue", "multiplicity")


def format_value(value: float) -> str:
    """Shortest stable text for an eigenvalue; negative zero prints as 0."""
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return f"{value + 0.0:.12g}"


@dataclass(frozen=True)
class SpectrumTable:
    """Sorted (eigenvalue, multiplicity) entries, complete for |value| <= cutoff."""

    entries: tuple[tuple[float, int], ...]
    cutoff: float
    symmetric: bool
    description: str = ""

    def __post_init__(self) -> None:
        entries = tuple((float(value), int(mult)) for value, mult in self.entries)
        if not self.cutoff > 0:
            raise ValueError(f"Spectrum cutoff must be positive, got {self.cutoff}")
        for idx, (value, mult) in enumerate(entries):
            if mult < 1:
                raise ValueError(f"Entry #{idx} has multiplicity {mult}; expected >= 1")
            if idx and value <= entries[idx - 1][0]:
                raise ValueError(f"Entry #{idx} breaks ascending order at {value}")
        object.__setattr__(self, "entries", entries)
        if self.symmetric and not self.mirror_closed():
            raise ValueError("Spectrum marked symmetric is not closed under negation")

    @classmethod
    def from_values(
        cls,
        values: Iterable[float],
        cutoff: float,
        symmetric: bool,
        multiplicities: Iterable[int] | None = None,
        description: str = "",
        tol: float = EXACT_MERGE_TOL,
    ) -> "SpectrumTable":
        """Accumulate multiplicities of values equal within tol."""
        vals = np.asarray(list(values), dtype=float)
        if multiplicities is None:
            mults = np.ones(vals.shape[0], dtype=int)
        else:
            mults = np.asarray(list(multiplicities), dtype=int)
            if mults.shape != vals.shape:
                raise ValueError("values and multiplicities differ in length")
        order = np.argsort(vals, kind="stable")
        merged: list[list[float | int]] = []
        for value, mult in zip(vals[order], mults[order]):
            if merged and abs(value - merged[-1][0]) <= tol:
                merged[-1][1] += int(mult)
            else:
                merged.append([float(value), int(mult)])
        entries = tuple((0.0 if abs(v) <= tol else float(v), int(m)) for v, m in merged)
        return cls(entries=entries, cutoff=cutoff, symmetric=symmetric, description=description)

    def mirror_closed(self, tol: float = EXACT_MERGE_TOL) -> bool:
        """True when the multiset is unchanged by value -> -value."""
        forward = self.entries
        backward = tuple(reversed(self.entries))
        return all(
            abs(a + b) <= tol * max(1.0, abs(a)) and ma == mb
            for (a, ma), (b, mb) in zip(forward, backward)
        )

    def values(self) -> list[float]:
        """Eigenvalues repeated by multiplicity."""
        return [value for value, mult in self.entries for _ in range(mult)]

    def count(self, bound: float | None = None) -> int:
        """Multiplicity-weighted number of entries with |value| <= bound."""
        limit = self.cutoff if bound is None else bound
        return sum(mult for value, mult in self.entries if abs(value) <= limit + EXACT_MERGE_TOL)

    def min_abs(self) -> float:
        if not self.entries:
            raise ValueError("Spectrum table is empty")
        return min(abs(value) for value, _ in self.entries)

    def multiplicity_of(self, value: float, tol: float = EXACT_MERGE_TOL) -> int:
        return sum(mult for v, mult in self.entries if abs(v - value) <= tol)

    def to_csv(self) -> str:
        buffer = io.StringIO()
        buffer.write(f"# {self.description}; cutoff={format_value(self.cutoff)}\n")
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for value, mult in self.entries:
            writer.writerow((format_value(value), mult))
        return buffer.getvalue()

    @classmethod
    def from_csv(cls, text: str, symmetric: bool | None = None) -> "SpectrumTable":
        lines = text.splitlines()
        comments = 0
        while comments < len(lines) and lines[comments].startswith("#"):
            comments += 1
        if comments == 0:
            raise ValueError("Spectrum CSV must start with a '#' header comment")
        # artifacts may prepend a run header; the table header is the last comment
        header = lines[comments - 1][1:].strip()
        description, sep, cutoff_part = header.rpartition("; cutoff=")
        if not sep:
            raise ValueError("Spectrum CSV header is missing the cutoff")
        reader = csv.reader(lines[comments:])
        columns = next(reader, None)
        if columns is None or tuple(columns) != CSV_COLUMNS:
            raise ValueError(f"Spectrum CSV columns must be {','.join(CSV_COLUMNS)}")
        entries: list[tuple[float, int]] = []
        for idx, row in enumerate(reader, start=1):
            if len(row) != 2:
                raise ValueError(f"Spectrum CSV row #{idx} has {len(row)} fields; expected 2")
            entries.append((float(row[0]), int(row[1])))
        table = cls(entries=tuple(entries), cutoff=float(cutoff_part), symmetric=False, description=description)
        resolved = table.mirror_closed() if symmetric is None else symmetric
        return cls(entries=table.entries, cutoff=table.cutoff, symmetric=resolved, description=description)
