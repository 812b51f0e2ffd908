"""Result files: CSV tables, plot-data blocks, JSON reports and the run manifest.

Every file is written to a temporary sibling and renamed into place, so a
failed run never leaves a truncated artifact. Floats are written with 17
significant digits, which makes outputs byte-identical across identical runs.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import os
import tempfile
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

MANIFEST_NAME = "manifest.json"


def format_float(value: float) -> str:
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return f"{value:.17g}"


def _cell(value: Any) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return format_float(value)
    return str(value)


def atomic_write_text(path: Path, text: str) -> Path:
    """Write ``text`` to ``path`` through a temporary file and os.replace."""
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise
    return path


def csv_text(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(value) for value in row])
    return buffer.getvalue()


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    return atomic_write_text(path, csv_text(header, rows))


def write_json(path: Path, data: Mapping[str, Any]) -> Path:
    return atomic_write_text(path, json.dumps(data, indent=2, sort_keys=True) + "\n")


def write_plot_data(
    path: Path, blocks: Iterable[tuple[str, Iterable[Sequence[float]]]]
) -> Path:
    """Write whitespace-separated blocks, one per label, separated by blank lines.

    Each block starts with a ``# label`` comment line, the layout gnuplot's
    ``index`` keyword and most plotting tools read directly.
    """
    lines: list[str] = []
    for label, rows in blocks:
        if lines:
            lines += ["", ""]
        lines.append(f"# {label}")
        lines.extend(" ".join(format_float(float(v)) for v in row) for row in rows)
    return atomic_write_text(path, "\n".join(lines) + "\n")


def file_digest(path: Path, chunk_bytes: int = 1 << 20) -> str:
    digest = hashlib.sha256()
    with path.open("rb") as f:
        while chunk := f.read(chunk_bytes):
            digest.update(chunk)
    return digest.hexdigest()


@dataclass
class Manifest:
    """Collects the files of one run and writes ``manifest.json``.

    Attributes:
        output_dir: Directory the run writes into.
        files: Output path (relative to output_dir) to SHA-256 digest.
    """

    output_dir: Path
    files: dict[str, str] = field(default_factory=dict)

    def add(self, path: Path) -> Path:
        self.files[path.relative_to(self.output_dir).as_posix()] = file_digest(path)
        return path

    def write(self, **fields: Any) -> Path:
        """Write the manifest with the recorded digests and extra top-level fields."""
        payload = dict(fields)
        payload["files"] = [
            {"path": name, "sha256": digest} for name, digest in sorted(self.files.items())
        ]
        return write_json(self.output_dir / MANIFEST_NAME, payload)
