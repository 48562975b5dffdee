"""Deterministic report serialization.

Numbers are printed with 12 significant digits in every format, complex
values as [re, im] pairs, undefined phases as the literal token
"undefined". Identical inputs produce byte-identical output.
"""

from __future__ import annotations

import numpy as np

__all__ = ["fmt", "encode_complex", "encode_matrix", "to_json", "to_csv_rows", "to_text"]

UNDEFINED = "undefined"


def fmt(x) -> str:
    """12-significant-digit rendering shared by all output formats."""
    return f"{float(x):.12g}"


def encode_complex(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def encode_matrix(M) -> list:
    M = np.asarray(M, dtype=complex)
    return [[encode_complex(v) for v in row] for row in M]


def _json_scalar(v) -> str:
    if v is None:
        return "null"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return fmt(v)
    if isinstance(v, str):
        escaped = v.replace("\\", "\\\\").replace('"', '\\"')
        return f'"{escaped}"'
    raise TypeError(f"cannot serialize {type(v).__name__}")


def to_json(obj, indent: int = 0) -> str:
    """Minimal JSON writer with deterministic float formatting."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{inner}"{k}": {to_json(v, indent + 1)}' for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + f"\n{pad}}}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        flat = all(not isinstance(v, (dict, list, tuple)) for v in obj)
        if flat:
            return "[" + ", ".join(_json_scalar(v) for v in obj) + "]"
        items = [f"{inner}{to_json(v, indent + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + f"\n{pad}]"
    return _json_scalar(obj)


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from _flatten(v, f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(obj, (list, tuple)):
        flat_numbers = all(isinstance(v, (int, float, np.integer, np.floating)) for v in obj)
        if flat_numbers:
            yield prefix, ";".join(fmt(v) for v in obj)
        else:
            for i, v in enumerate(obj):
                yield from _flatten(v, f"{prefix}.{i}")
    elif obj is None:
        yield prefix, UNDEFINED
    elif isinstance(obj, bool):
        yield prefix, "true" if obj else "false"
    elif isinstance(obj, (int, np.integer)):
        yield prefix, str(int(obj))
    elif isinstance(obj, (float, np.floating)):
        yield prefix, fmt(obj)
    else:
        yield prefix, str(obj)


def to_csv_rows(obj) -> str:
    """Flatten a report to ``key,value`` CSV rows (dot-joined key paths)."""
    lines = ["key,value"]
    for key, value in _flatten(obj):
        if "," in value:
            value = f'"{value}"'
        lines.append(f"{key},{value}")
    return "\n".join(lines) + "\n"


def to_text(obj) -> str:
    """Human-readable key = value listing in report order."""
    rows = list(_flatten(obj))
    width = max((len(k) for k, _ in rows), default=0)
    return "\n".join(f"{k.ljust(width)}  {v}" for k, v in rows) + "\n"
