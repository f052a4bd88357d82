"""Deterministic JSON and CSV emission.

Every float is written with 17 significant digits so that numeric fields
round-trip bit-exactly and repeated runs of the same configuration produce
byte-identical files.
"""

from __future__ import annotations

import json
import os
import tempfile

import numpy as np

SIGNIFICANT_DIGITS = 17


def format_float(value) -> str:
    """Render a float with full round-trip precision."""
    value = float(value)
    if not np.isfinite(value):
        raise ValueError(f"non-finite value cannot be serialized: {value!r}")
    return format(value, f".{SIGNIFICANT_DIGITS}g")


def _emit(obj, out: list, level: int, indent: int) -> None:
    pad = " " * (indent * level)
    inner = " " * (indent * (level + 1))
    if obj is None:
        out.append("null")
    elif isinstance(obj, (bool, np.bool_)):
        out.append("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(format_float(obj))
    elif isinstance(obj, (complex, np.complexfloating)):
        out.append(f"[{format_float(obj.real)}, {format_float(obj.imag)}]")
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, np.ndarray):
        _emit(obj.tolist(), out, level, indent)
    elif isinstance(obj, (list, tuple)):
        if len(obj) == 0:
            out.append("[]")
            return
        out.append("[\n")
        for i, item in enumerate(obj):
            out.append(inner)
            _emit(item, out, level + 1, indent)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(pad + "]")
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        items = list(obj.items())
        for i, (key, value) in enumerate(items):
            if not isinstance(key, str):
                raise TypeError(f"JSON object keys must be strings, got {key!r}")
            out.append(inner + json.dumps(key) + ": ")
            _emit(value, out, level + 1, indent)
            out.append(",\n" if i < len(items) - 1 else "\n")
        out.append(pad + "}")
    else:
        raise TypeError(f"cannot serialize object of type {type(obj).__name__}")


def dumps(obj, indent: int = 2) -> str:
    """Serialize to JSON text with fixed float formatting."""
    out: list = []
    _emit(obj, out, 0, indent)
    out.append("\n")
    return "".join(out)


def write_text_atomic(path, text: str) -> None:
    """Write text to ``path`` via a temp file and rename, so readers never
    observe a partial file."""
    path = os.fspath(path)
    directory = os.path.dirname(path) or "."
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_json_atomic(path, obj) -> None:
    write_text_atomic(path, dumps(obj))


def write_csv_atomic(path, header: list[str], columns: list) -> None:
    """Write equal-length numeric columns as CSV with a header row."""
    columns = [np.asarray(c) for c in columns]
    length = len(columns[0])
    if any(len(c) != length for c in columns):
        raise ValueError("CSV columns must have equal length")
    lines = [",".join(header)]
    for i in range(length):
        lines.append(",".join(format_float(c[i]) for c in columns))
    write_text_atomic(path, "\n".join(lines) + "\n")


def read_csv(path) -> tuple[list[str], np.ndarray]:
    """Read a CSV written by :func:`write_csv_atomic`.

    Returns (header, data) with data of shape (n_rows, n_columns).
    """
    with open(path) as handle:
        header = handle.readline().strip().split(",")
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return header, data
