"""CSV output: ``#`` config header, RFC-4180 body, floats at 9 significant digits."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, fields, is_dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .config import ExperimentConfig


def _cell(v) -> str:
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        return f"{v:.9g}"
    return str(v)


def to_csv(records: Sequence, config: ExperimentConfig | None = None,
           exclude: Iterable[str] = ()) -> str:
    exclude = set(exclude)
    buf = io.StringIO()
    if config is not None:
        for line in config.header_lines():
            buf.write(f"# {line}\n")
    if not records:
        return buf.getvalue()
    cols = [f.name for f in fields(records[0]) if f.name not in exclude]
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(cols)
    for r in records:
        d = asdict(r) if is_dataclass(r) else dict(r)
        writer.writerow([_cell(d[c]) for c in cols])
    return buf.getvalue()


def write_csv(path: str | Path, records: Sequence, config: ExperimentConfig | None = None,
              exclude: Iterable[str] = ()) -> None:
    Path(path).write_text(to_csv(records, config, exclude), newline="")


def read_csv(path: str | Path) -> tuple[list[str], list[dict]]:
    """Returns (header comment lines, rows as dicts of strings)."""
    text = Path(path).read_text()
    comments = [ln[2:] for ln in text.splitlines() if ln.startswith("# ")]
    body = [ln for ln in text.splitlines(keepends=True) if not ln.startswith("#")]
    return comments, list(csv.DictReader(body))
