"""Tabular ingestion: loading, measure-type inference, and key inference.

Type inference is intentionally simple: a column is temporal if every
non-null value is an ISO date/datetime or a 4-digit year in [1000, 2999],
quantitative if every non-null value parses as a number, and nominal
otherwise. The temporal check runs first so that year columns (which also
parse as numbers) end up temporal and stay eligible for key inference.

Key inference searches subsets of the non-quantitative columns (size <= 4)
for a minimal set whose value tuples uniquely index the rows.
"""

from __future__ import annotations

import csv
import datetime
import io
import itertools
import json
import math
import re
from dataclasses import dataclass, replace
from typing import Any, Iterable, Optional

from .model import Measure

NULL_STRINGS = {"", "na", "n/a", "null", "none", "nan"}
MAX_KEY_SIZE = 4

_YEAR_RE = re.compile(r"^[12]\d{3}$")


class ParseError(ValueError):
    def __init__(self, message, line=None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")


@dataclass(frozen=True)
class Column:
    name: str
    measure: Optional[Measure] = None


@dataclass(frozen=True)
class Dataset:
    columns: tuple[Column, ...] = ()
    rows: tuple[tuple, ...] = ()
    key: tuple[str, ...] = ()

    def column_names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.columns)

    def index(self, name: str) -> int:
        for i, c in enumerate(self.columns):
            if c.name == name:
                return i
        raise KeyError(name)

    def measure(self, name: str) -> Optional[Measure]:
        return self.columns[self.index(name)].measure

    def values(self, name: str) -> list:
        i = self.index(name)
        return [r[i] for r in self.rows]

    def to_records(self) -> list[dict]:
        names = self.column_names()
        return [dict(zip(names, r)) for r in self.rows]


def load_dataset(data: bytes, fmt: str = "csv") -> Dataset:
    """Parse CSV (RFC-4180) or a JSON array of flat records; no typing yet."""
    if fmt == "csv":
        return _load_csv(data)
    if fmt == "json-records":
        return _load_json_records(data)
    raise ParseError(f"unknown format {fmt!r}")


def _load_csv(data: bytes) -> Dataset:
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as e:
        raise ParseError(f"not valid UTF-8: {e}") from None
    reader = csv.reader(io.StringIO(text))
    try:
        rows = list(reader)
    except csv.Error as e:
        raise ParseError(str(e), line=reader.line_num)
    if not rows:
        raise ParseError("empty input", line=1)
    header = rows[0]
    out = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise ParseError(
                f"expected {len(header)} cells, got {len(row)}", line=lineno)
        out.append(tuple(None if cell.strip().lower() in NULL_STRINGS else cell
                         for cell in row))
    return Dataset(columns=tuple(Column(h) for h in header), rows=tuple(out))


def _load_json_records(data: bytes) -> Dataset:
    try:
        records = json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise ParseError(f"invalid JSON records: {e}") from None
    if not isinstance(records, list) or any(not isinstance(r, dict) for r in records):
        raise ParseError("expected a JSON array of flat objects")
    names: list[str] = []
    for r in records:
        for k in r:
            if k not in names:
                names.append(k)
    rows = tuple(tuple(r.get(k) for k in names) for r in records)
    return Dataset(columns=tuple(Column(n) for n in names), rows=rows)


# ---------------------------------------------------------------------------
# Type inference


def parse_temporal(value) -> Optional[Any]:
    """Canonical temporal value: int year, datetime.date, or datetime.datetime."""
    if isinstance(value, (datetime.date, datetime.datetime)):
        return value
    if isinstance(value, bool):
        return None
    if isinstance(value, int) and 1000 <= value <= 2999:
        return value
    if isinstance(value, float) and value.is_integer() and 1000 <= value <= 2999:
        return int(value)
    if isinstance(value, str):
        s = value.strip()
        if _YEAR_RE.match(s):
            return int(s)
        for parser in (datetime.date.fromisoformat, datetime.datetime.fromisoformat):
            try:
                return parser(s)
            except ValueError:
                continue
    return None


def parse_number(value) -> Optional[float]:
    if isinstance(value, bool):
        return None
    if isinstance(value, (int, float)):
        return None if isinstance(value, float) and math.isnan(value) else float(value)
    if isinstance(value, str):
        try:
            return float(value.strip())
        except ValueError:
            return None
    return None


def infer_types(dataset: Dataset) -> dict[str, Measure]:
    """Deterministic measure type per column; all-null columns fall back to nominal."""
    out = {}
    for i, col in enumerate(dataset.columns):
        cells = [r[i] for r in dataset.rows if r[i] is not None]
        if cells and all(parse_temporal(c) is not None for c in cells):
            out[col.name] = Measure.TEMPORAL
        elif cells and all(parse_number(c) is not None for c in cells):
            out[col.name] = Measure.QUANTITATIVE
        else:
            out[col.name] = Measure.NOMINAL
    return out


def apply_types(dataset: Dataset, types: dict[str, Measure]) -> Dataset:
    """Attach measures and coerce cells to canonical values."""
    columns = tuple(replace(c, measure=types[c.name]) for c in dataset.columns)
    rows = []
    for r in dataset.rows:
        cells = []
        for col, cell in zip(columns, r):
            if cell is None:
                cells.append(None)
            elif col.measure == Measure.TEMPORAL:
                cells.append(parse_temporal(cell))
            elif col.measure == Measure.QUANTITATIVE:
                num = parse_number(cell)
                if num is not None and num.is_integer():
                    if isinstance(cell, int) or (
                            isinstance(cell, str) and "." not in cell and "e" not in cell.lower()):
                        num = int(num)
                cells.append(num)
            else:
                cells.append(cell if isinstance(cell, str) else str(cell))
        rows.append(tuple(cells))
    return Dataset(columns=columns, rows=tuple(rows), key=dataset.key)


def load_typed(data: bytes, fmt: str = "csv") -> Dataset:
    ds = load_dataset(data, fmt)
    ds = apply_types(ds, infer_types(ds))
    return replace(ds, key=tuple(infer_key(ds, list(ds.column_names()))))


# ---------------------------------------------------------------------------
# Key inference


def distinct_count(dataset: Dataset, name: str) -> int:
    return len(set(dataset.values(name)))


def _is_unique(dataset: Dataset, cols: tuple[str, ...]) -> bool:
    idx = [dataset.index(c) for c in cols]
    seen = set()
    for r in dataset.rows:
        t = tuple(r[i] for i in idx)
        if any(v is None for v in t):
            return False  # nulls disqualify the candidate
        if t in seen:
            return False
        seen.add(t)
    return True


def infer_key(dataset: Dataset, selected: Iterable[str]) -> list[str]:
    """Minimal subset of the selected non-quantitative columns that uniquely
    indexes the rows; empty when none exists within the size cap.

    Ties break by fewest fields, then smaller product of distinct counts,
    then column order.
    """
    if not dataset.rows:
        return []
    selected = list(selected)
    order = {n: i for i, n in enumerate(dataset.column_names())}
    candidates = [n for n in dataset.column_names()
                  if n in selected and dataset.measure(n) in
                  (Measure.TEMPORAL, Measure.NOMINAL, Measure.ORDINAL)]
    for size in range(1, min(MAX_KEY_SIZE, len(candidates)) + 1):
        found = []
        for combo in itertools.combinations(candidates, size):
            if _is_unique(dataset, combo):
                product = 1
                for c in combo:
                    product *= distinct_count(dataset, c)
                found.append((product, tuple(order[c] for c in combo), combo))
        if found:
            found.sort()
            return list(found[0][2])
    return []
