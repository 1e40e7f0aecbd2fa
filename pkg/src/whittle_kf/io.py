"""Lossless text serialisation helpers (CSV/JSON)."""
from __future__ import annotations

import csv
import io
import json
import math


def fmt(v) -> str:
    """17 significant digits; ``inf`` spelled out."""
    v = float(v)
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return format(v, ".17g")


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=_default) + "\n"


def _default(o):
    if hasattr(o, "to_json"):
        return o.to_json()
    if hasattr(o, "__float__"):
        return float(o)
    raise TypeError(f"cannot serialise {type(o).__name__}")


CURVE_HEADER = ["x", "lambda", "word", "method", "bound"]


def write_curve_csv(points, config: dict | None = None) -> str:
    buf = io.StringIO()
    if config is not None:
        buf.write("# config: " + json.dumps(config, sort_keys=True) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CURVE_HEADER)
    for p in points:
        w.writerow([fmt(p.x), fmt(p.lam), p.word or "", p.method, fmt(p.bound)])
    return buf.getvalue()


def read_curve_csv(text: str):
    """Inverse of :func:`write_curve_csv`; returns ``(config, points)``."""
    from .index import IndexPoint
    lines = text.splitlines()
    config = None
    if lines and lines[0].startswith("# config: "):
        config = json.loads(lines[0][len("# config: "):])
        lines = lines[1:]
    rows = list(csv.reader(lines))
    if not rows or rows[0] != CURVE_HEADER:
        raise ValueError("not an index-curve CSV")
    pts = [IndexPoint(float(x), float(lam), word or None, method, float(bound))
           for x, lam, word, method, bound in rows[1:]]
    return config, pts
