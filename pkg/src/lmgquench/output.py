"""CSV and JSON emission.

CSV cells carry 17 significant digits so doubles round-trip losslessly;
every run also writes a JSON metadata sidecar echoing the complete
configuration (all defaults materialized), which is sufficient to
reproduce the CSV byte for byte.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

__all__ = ["ResultBundle", "format_cell", "write_csv", "write_json"]


@dataclass
class ResultBundle:
    """One command's tabular payload plus its metadata and optional sidecar."""

    command: str
    columns: list[str]
    rows: list[Sequence]
    meta: dict = field(default_factory=dict)
    sidecar: dict | None = None
    sidecar_name: str = "levels"


def format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (bool,)):
        return "true" if value else "false"
    if isinstance(value, (int,)) or (hasattr(value, "dtype") and value.dtype.kind == "i"):
        return str(int(value))
    return f"{float(value):.17g}"


def write_csv(path: Path, columns: Sequence[str], rows: Iterable[Sequence]) -> None:
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(format_cell(v) for v in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n",
                    encoding="utf-8")
