"""Parsing and formatting helpers shared by the CLI and the JSON readers."""

from __future__ import annotations

import json
import math
import re
from pathlib import Path

import numpy as np

SCHEMA = "borel-lab/1"

_REAL = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")


def _split_imag(body):
    # last sign that is not part of an exponent separates the two parts
    for k in range(len(body) - 1, 0, -1):
        if body[k] in "+-" and body[k - 1] not in "eE":
            return body[:k], body[k:]
    return "", body


def parse_complex(text) -> complex:
    """Parse ``"a+bi"`` style literals (spaces allowed, ``i`` or ``j``)."""
    if isinstance(text, (int, float, complex)):
        return complex(text)
    s = str(text).replace(" ", "")
    bad = ValueError(f"cannot parse complex literal {text!r} (expected e.g. '0.5+0.25i')")
    if not s:
        raise bad
    if s[-1] not in "ij":
        if not _REAL.fullmatch(s):
            raise bad
        return complex(float(s), 0.0)
    re_txt, im_txt = _split_imag(s[:-1])
    if re_txt and not _REAL.fullmatch(re_txt):
        raise bad
    if im_txt in ("", "+", "-"):
        im = -1.0 if im_txt == "-" else 1.0
    elif _REAL.fullmatch(im_txt):
        im = float(im_txt)
    else:
        raise bad
    return complex(float(re_txt) if re_txt else 0.0, im)


def load_json_arg(value):
    """Inline JSON (starting with ``{`` or ``[``) or a path to a JSON file."""
    text = value.strip()
    if text.startswith(("{", "[")):
        src, raw = "<inline>", text
    else:
        src, raw = value, Path(value).read_text()
    try:
        return json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ValueError(f"{src}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def fmt_float(x) -> str:
    x = float(x)
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    out = format(x, ".17g")
    if out in ("-0",):
        out = "-0.0"
    return out


def dumps(obj, indent=2, _level=0) -> str:
    """JSON text with every float written to 17 significant digits."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float, np.floating, np.integer)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(dumps(v, indent, _level + 1) for v in obj) + "]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt_float(obj)
    if isinstance(obj, complex):
        return dumps([obj.real, obj.imag], indent, _level)
    return json.dumps(str(obj) if not isinstance(obj, str) else obj)


def pair(z):
    if z is None:
        return None
    z = complex(z)
    return [z.real, z.imag]
