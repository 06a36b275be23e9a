"""Byte-stable JSON and CSV serialization for reports.

Output files must be reproducible bit-for-bit from the same run
configuration, so floats are rendered with a fixed 17-significant-digit
format (enough to round-trip float64 exactly), dict key order is the
insertion order of the producing code, and nothing time- or
machine-dependent is ever written.
"""

from __future__ import annotations

import math

__all__ = ["format_float", "stable_dumps", "csv_lines"]


def format_float(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return format(float(x), ".17g")


def _escape(s: str) -> str:
    out = ["\""]
    for ch in s:
        if ch == "\"":
            out.append("\\\"")
        elif ch == "\\":
            out.append("\\\\")
        elif ch == "\n":
            out.append("\\n")
        elif ch == "\t":
            out.append("\\t")
        elif ch == "\r":
            out.append("\\r")
        elif ord(ch) < 0x20:
            out.append(f"\\u{ord(ch):04x}")
        else:
            out.append(ch)
    out.append("\"")
    return "".join(out)


def _dump(obj, parts: list[str], indent: int, compact: bool) -> None:
    pad = "" if compact else "  " * indent
    nl = "" if compact else "\n"
    inner_pad = "" if compact else pad + "  "
    if obj is None:
        parts.append("null")
    elif obj is True:
        parts.append("true")
    elif obj is False:
        parts.append("false")
    elif isinstance(obj, str):
        parts.append(_escape(obj))
    elif isinstance(obj, int):
        parts.append(str(obj))
    elif isinstance(obj, float):
        parts.append(format_float(obj))
    elif isinstance(obj, dict):
        if not obj:
            parts.append("{}")
            return
        parts.append("{" + nl)
        for i, (k, v) in enumerate(obj.items()):
            parts.append(f"{inner_pad}{_escape(str(k))}: ")
            _dump(v, parts, indent + 1, compact)
            parts.append(("," if i < len(obj) - 1 else "") + nl)
        parts.append(pad + "}")
    elif isinstance(obj, (list, tuple)):
        if not obj:
            parts.append("[]")
            return
        parts.append("[" + nl)
        for i, v in enumerate(obj):
            parts.append(inner_pad)
            _dump(v, parts, indent + 1, compact)
            parts.append(("," if i < len(obj) - 1 else "") + nl)
        parts.append(pad + "]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def stable_dumps(obj, compact: bool = False) -> str:
    """Deterministic JSON text: insertion-ordered keys, 17-digit floats."""
    parts: list[str] = []
    _dump(obj, parts, 0, compact)
    if not compact:
        parts.append("\n")
    return "".join(parts)


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format_float(v)
    if isinstance(v, int):
        return str(v)
    s = str(v)
    if any(ch in s for ch in ",\"\n"):
        return "\"" + s.replace("\"", "\"\"") + "\""
    return s


def csv_lines(header: list[str], rows: list[list], config_echo: str | None = None) -> str:
    """CSV text with an optional leading config-echo comment line."""
    lines = []
    if config_echo is not None:
        lines.append("# config " + config_echo)
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(_csv_cell(v) for v in row))
    return "\n".join(lines) + "\n"
