"""Tidy table output shared by every emitter (CSV or JSON)."""

from __future__ import annotations

import csv
import io
import json
import math
from typing import Any, Iterable, Sequence

__all__ = ["Table", "fmt"]


def fmt(v: Any) -> str:
    """17 significant digits for floats, round-trip exact; empty for missing."""
    if v is None:
        return ""
    if isinstance(v, bool):
        return str(int(v))
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        if math.isnan(v):
            return ""
        return format(v, ".17g")
    if hasattr(v, "item"):
        return fmt(v.item())
    return str(v)


def _jsonable(v: Any) -> Any:
    if hasattr(v, "item"):
        v = v.item()
    if isinstance(v, float) and not math.isfinite(v):
        return None
    return v


class Table:
    """Named columns plus rows; renders to CSV or JSON deterministically."""

    def __init__(self, columns: Sequence[str], rows: Iterable[Sequence[Any]] = ()):
        self.columns = list(columns)
        self.rows: list[list[Any]] = []
        for r in rows:
            self.append(r)

    def append(self, row: Sequence[Any]) -> None:
        if len(row) != len(self.columns):
            raise ValueError(f"row has {len(row)} entries, expected {len(self.columns)}")
        self.rows.append(list(row))

    def column(self, name: str) -> list[Any]:
        j = self.columns.index(name)
        return [r[j] for r in self.rows]

    def __len__(self) -> int:
        return len(self.rows)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for r in self.rows:
            w.writerow([fmt(v) for v in r])
        return buf.getvalue()

    def to_dict(self) -> dict[str, list[Any]]:
        return {c: [_jsonable(v) for v in self.column(c)] for c in self.columns}

    def to_json(self, metadata: dict | None = None) -> str:
        doc = {"columns": self.to_dict(), "metadata": metadata or {}}
        return json.dumps(doc, indent=1, sort_keys=True, allow_nan=False) + "\n"
