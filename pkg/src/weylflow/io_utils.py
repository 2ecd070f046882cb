"""Deterministic serialization helpers.

JSON output is byte-stable across runs: keys are sorted, floats are printed
with 17 significant digits, and complex numbers appear as [re, im] pairs.
"""

from __future__ import annotations

import json
from fractions import Fraction


def fmt_float(x: float) -> str:
    return format(float(x), ".17g")


def _normalize(obj):
    if isinstance(obj, float):
        return _Raw(fmt_float(obj))
    if isinstance(obj, complex):
        return [_Raw(fmt_float(obj.real)), _Raw(fmt_float(obj.imag))]
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, dict):
        return {str(k): _normalize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_normalize(v) for v in obj]
    return obj


class _Raw:
    def __init__(self, text):
        self.text = text


def dumps_canonical(obj) -> str:
    normalized = _normalize(obj)
    # encode _Raw markers as bare tokens by a two-pass replacement
    token_map = {}

    def strip(o):
        if isinstance(o, _Raw):
            key = f"@@raw{len(token_map)}@@"
            token_map[key] = o.text
            return key
        if isinstance(o, dict):
            return {k: strip(v) for k, v in o.items()}
        if isinstance(o, list):
            return [strip(v) for v in o]
        return o

    text = json.dumps(strip(normalized), sort_keys=True, indent=1)
    for key, val in token_map.items():
        text = text.replace(f'"{key}"', val)
    return text + "\n"


def rational_str(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"
