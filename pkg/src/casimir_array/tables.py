"""Result tables and their deterministic CSV/JSON serialisation."""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path


@dataclass(frozen=True)
class Column:
    name: str
    unit: str  # e.g. "rad", "Omega", "Gamma0", "r0", "1/s", "" for labels

    @property
    def header(self) -> str:
        return f"{self.name} [{self.unit}]" if self.unit else self.name


@dataclass
class ResultTable:
    """Named table with per-column units and a metadata block."""

    name: str
    columns: list
    rows: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def add(self, *values):
        if len(values) != len(self.columns):
            raise ValueError(f"row has {len(values)} values, table has {len(self.columns)} columns")
        self.rows.append(tuple(values))

    def column(self, name: str) -> list:
        idx = [c.name for c in self.columns].index(name)
        return [r[idx] for r in self.rows]

    def select(self, **match) -> list:
        names = [c.name for c in self.columns]
        keys = [(names.index(k), v) for k, v in match.items()]
        return [r for r in self.rows if all(r[i] == v for i, v in keys)]


def format_value(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return format(x, ".17g")
    return str(x)


def to_csv(table: ResultTable) -> str:
    buf = io.StringIO()
    buf.write(",".join(c.header for c in table.columns) + "\n")
    for row in table.rows:
        buf.write(",".join(format_value(v) for v in row) + "\n")
    return buf.getvalue()


def _jsonable(x):
    if isinstance(x, float) and not math.isfinite(x):
        return format_value(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def to_json(table: ResultTable) -> str:
    doc = {
        "name": table.name,
        "columns": [{"name": c.name, "unit": c.unit} for c in table.columns],
        "rows": _jsonable([list(r) for r in table.rows]),
        "metadata": _jsonable(table.metadata),
    }
    return json.dumps(doc, indent=1, sort_keys=False) + "\n"


def metadata_json(table: ResultTable) -> str:
    return json.dumps(_jsonable(table.metadata), indent=1) + "\n"


def write_text(path: Path, text: str):
    # newline="\n" keeps LF endings on every platform
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def write_table(table: ResultTable, outdir, formats=("csv",)) -> list[Path]:
    """Write ``table`` as ``<name>.csv`` (plus ``<name>.meta.json``) and/or ``<name>.json``."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    if "csv" in formats:
        p = outdir / f"{table.name}.csv"
        write_text(p, to_csv(table))
        m = outdir / f"{table.name}.meta.json"
        write_text(m, metadata_json(table))
        written += [p, m]
    if "json" in formats:
        p = outdir / f"{table.name}.json"
        write_text(p, to_json(table))
        written.append(p)
    return written


def read_csv(path) -> tuple[list[str], list[list[str]]]:
    """Header and raw string cells of a CSV written by :func:`write_table`."""
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    return lines[0].split(","), [ln.split(",") for ln in lines[1:]]
