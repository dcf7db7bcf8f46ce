"""Deterministic JSON emission for reports.

The CLI contract requires byte-identical output across runs: keys sorted,
floats printed with 15 significant digits, no locale or hash-order
dependence.  ``json.dumps`` cannot pin float formatting, hence this small
emitter.
"""

import json
import math


def format_float(v: float) -> str:
    if not math.isfinite(v):
        raise ValueError(f"non-finite value {v!r} cannot enter a report")
    if v == 0.0:
        v = 0.0  # normalize -0.0
    return format(v, ".15g")


def dumps(obj, indent: int = 2) -> str:
    """Serialize dicts/lists/scalars with sorted keys and fixed floats."""
    out = []
    _emit(obj, out, indent, 0)
    out.append("\n")
    return "".join(out)


def _emit(obj, out, indent, depth):
    pad = " " * (indent * (depth + 1))
    close_pad = " " * (indent * depth)
    if isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        keys = sorted(obj)
        for i, k in enumerate(keys):
            out.append(f"{pad}{json.dumps(str(k))}: ")
            _emit(obj[k], out, indent, depth + 1)
            out.append(",\n" if i + 1 < len(keys) else "\n")
        out.append(f"{close_pad}}}")
    elif isinstance(obj, (list, tuple)):
        if not obj:
            out.append("[]")
            return
        out.append("[\n")
        for i, item in enumerate(obj):
            out.append(pad)
            _emit(item, out, indent, depth + 1)
            out.append(",\n" if i + 1 < len(obj) else "\n")
        out.append(f"{close_pad}]")
    elif isinstance(obj, bool) or obj is None:
        out.append(json.dumps(obj))
    elif isinstance(obj, float):
        out.append(format_float(obj))
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__} deterministically")
