"""CSV output with a reproducibility header.

Every file starts with comment rows (prefixed ``#``) carrying the full
resolved configuration, seed derivation, solver tolerances, and version
information, followed by a regular CSV table.  Floats print with nine
significant digits.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Iterable, Mapping


def format_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.9g}"
    return str(v)


def write_csv(path: str | Path, meta: Mapping, fieldnames: list[str], rows: Iterable[Mapping]):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        for key in sorted(meta):
            fh.write(f"# {key}: {json.dumps(meta[key], sort_keys=True)}\n")
        writer = csv.writer(fh)
        writer.writerow(fieldnames)
        for row in rows:
            writer.writerow([format_value(row[name]) for name in fieldnames])


def read_csv(path: str | Path) -> tuple[dict, list[dict]]:
    """Read back a file produced by :func:`write_csv` (used by tests)."""
    meta: dict = {}
    lines = Path(path).read_text().splitlines()
    body_start = 0
    for i, line in enumerate(lines):
        if line.startswith("# "):
            key, _, payload = line[2:].partition(": ")
            meta[key] = json.loads(payload)
            body_start = i + 1
        else:
            break
    reader = csv.DictReader(lines[body_start:])
    return meta, list(reader)
