"""Measure files (JSON) and scored-alternative datasets (CSV).

A measure file is a JSON object::

    {"n": 2, "values": [0.0, 0.3, 0.5, 1.0], "name": "example",
     "labels": ["{}", "{1}", "{2}", "{1,2}"]}

``values`` is the dense table in ascending bitmask order (bit ``i-1`` of the
index is criterion ``i``, so index 5 is ``{1,3}``).  ``name`` and ``labels``
are optional; labels are written for readability and ignored on load.
"""

from __future__ import annotations

import csv
import io as _io
import json
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from fmgraph.exceptions import FormatError, ValidationError
from fmgraph.fitting import Dataset
from fmgraph.lattice import DEFAULT_TOL, FuzzyMeasure, SetFunction, subset_label, validate_set_function


@dataclass(frozen=True)
class MeasureFile:
    measure: SetFunction
    name: Optional[str] = None


def measure_to_dict(mu: SetFunction, name: Optional[str] = None, label_mode: Optional[str] = None) -> dict:
    out = {"n": mu.n, "values": [float(v) for v in mu.values]}
    if name is not None:
        out["name"] = name
    if label_mode is not None:
        out["labels"] = [subset_label(a, label_mode) for a in range(len(mu))]
    return out


def dumps_measure(mu: SetFunction, name: Optional[str] = None, label_mode: Optional[str] = None) -> str:
    """JSON text; floats are written with full round-trip precision."""
    return json.dumps(measure_to_dict(mu, name, label_mode), indent=2) + "\n"


def save_measure(path, mu: SetFunction, name: Optional[str] = None, label_mode: Optional[str] = None) -> None:
    Path(path).write_text(dumps_measure(mu, name, label_mode), encoding="utf-8")


def _value_line(text: str, k: int) -> Optional[int]:
    """Best-effort line number of the ``k``-th entry of the values array."""
    start = text.find('"values"')
    if start < 0:
        return None
    pos = text.find("[", start)
    depth = 0
    count = 0
    for i in range(pos + 1, len(text)):
        ch = text[i]
        if ch in "[{":
            depth += 1
        elif ch in "]}":
            if depth == 0:
                return None
            depth -= 1
        elif ch == "," and depth == 0:
            count += 1
        elif not ch.isspace() and count == k:
            return text.count("\n", 0, i) + 1
    return None


def loads_measure(text: str, tol: float = DEFAULT_TOL, validate: bool = True) -> MeasureFile:
    """Parse measure JSON.

    Raises:
        FormatError: Malformed JSON, missing fields, wrong table length or
            non-numeric entries (with line/field location).
        ValidationError: The table is not a fuzzy measure (unless
            ``validate=False``, which returns a plain :class:`SetFunction`).
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc.msg}", line=exc.lineno) from None
    if not isinstance(doc, dict):
        raise FormatError("measure file must hold a JSON object", line=1)
    for key in ("n", "values"):
        if key not in doc:
            raise FormatError("missing required field", field=key)
    n = doc["n"]
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise FormatError(f"n must be a positive integer, got {n!r}", field="n")
    raw = doc["values"]
    if not isinstance(raw, list):
        raise FormatError("values must be an array", field="values")
    if len(raw) != 1 << n:
        raise FormatError(f"values has {len(raw)} entries, expected 2**{n} = {1 << n}", field="values")
    vals = []
    for k, v in enumerate(raw):
        if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
            raise FormatError(f"non-numeric value {v!r}", line=_value_line(text, k), field=f"values[{k}]")
        vals.append(float(v))
    name = doc.get("name")
    if name is not None and not isinstance(name, str):
        raise FormatError("name must be a string", field="name")
    try:
        if validate:
            return MeasureFile(FuzzyMeasure(vals, tol=tol), name)
        return MeasureFile(SetFunction(vals), name)
    except ValueError as exc:
        raise FormatError(str(exc), field="values") from None


def load_measure(path, tol: float = DEFAULT_TOL, validate: bool = True) -> MeasureFile:
    """Read a measure file; see :func:`loads_measure`."""
    return loads_measure(Path(path).read_text(encoding="utf-8"), tol, validate)


def _float_cell(cell: str, line: int, field: str) -> float:
    try:
        v = float(cell)
    except ValueError:
        raise FormatError(f"cannot parse {cell!r} as a number", line=line, field=field) from None
    if not math.isfinite(v):
        raise FormatError(f"non-finite number {cell!r}", line=line, field=field)
    return v


def loads_dataset(text: str) -> Dataset:
    """Parse ``alternative, score_1..score_n, desired`` CSV with a header row.

    Raises:
        FormatError: Ragged rows, too few columns or unparsable numbers.
    """
    rows = list(csv.reader(_io.StringIO(text)))
    lines = [(i + 1, r) for i, r in enumerate(rows) if r and any(c.strip() for c in r)]
    if not lines:
        raise FormatError("empty dataset file", line=1)
    _, header = lines[0]
    header = [h.strip() for h in header]
    if len(header) < 4:
        raise FormatError("expected an id column, at least two score columns and a desired column", line=lines[0][0])
    labels, scores, desired = [], [], []
    for lineno, row in lines[1:]:
        if len(row) != len(header):
            raise FormatError(f"row has {len(row)} fields, header has {len(header)}", line=lineno)
        labels.append(row[0].strip())
        scores.append([_float_cell(c.strip(), lineno, header[j + 1]) for j, c in enumerate(row[1:-1])])
        desired.append(_float_cell(row[-1].strip(), lineno, header[-1]))
    if not scores:
        raise FormatError("dataset has no data rows", line=lines[0][0])
    return Dataset(np.array(scores), np.array(desired), tuple(labels))


def load_dataset(path) -> Dataset:
    return loads_dataset(Path(path).read_text(encoding="utf-8"))


def table1_text() -> str:
    """The bundled seven-alternative, five-criterion example dataset as CSV."""
    return resources.files("fmgraph").joinpath("data/table1.csv").read_text(encoding="utf-8")


def table1() -> Dataset:
    return loads_dataset(table1_text())


def format_number(v: float, full_precision: bool = False) -> str:
    """Six significant digits, or shortest round-trip repr with ``full_precision``."""
    v = float(v)
    if full_precision:
        return repr(v)
    s = f"{v:.6g}"
    return "0" if s == "-0" else s


def write_csv(path, header: Sequence[str], rows, full_precision: bool = False) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([c if isinstance(c, str) else format_number(c, full_precision) for c in row])


def check_measure(values, tol: float = DEFAULT_TOL) -> None:
    """Raise :class:`ValidationError` listing violated edges."""
    report = validate_set_function(SetFunction(values), tol)
    if not report.ok:
        raise ValidationError(report.describe(), report)
