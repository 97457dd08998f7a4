"""Deterministic JSON and CSV writers.

Floats are printed with 17 significant digits and dict keys keep insertion
order, so identical runs produce byte-identical files. Exact rationals are
written as ``"p/q"`` strings.
"""

import json
import math
from fractions import Fraction

import numpy as np

from .poly import Polynomial, PolyVectorField, format_polynomial


def format_float(x):
    x = float(x)
    if math.isnan(x) or math.isinf(x):
        # not representable in JSON numbers
        return json.dumps(str(x))
    if x == 0:
        return "0.0"
    text = format(x, ".17g")
    if "e" not in text and "." not in text:
        text += ".0"
    return text


def _encode(obj, variables, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None or isinstance(obj, (bool, np.bool_)):
        return json.dumps(None if obj is None else bool(obj))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(obj)
    if isinstance(obj, Fraction):
        return json.dumps(f"{obj.numerator}/{obj.denominator}")
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, Polynomial):
        return json.dumps(format_polynomial(obj, variables))
    if isinstance(obj, PolyVectorField):
        obj = [format_polynomial(c, variables) for c in obj]
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_encode(v, variables, indent, level + 1)}"
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [f"{pad}{_encode(v, variables, indent, level + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj, variables=None, indent=2):
    """Serialise reports; polynomials are written in canonical text form."""
    return _encode(obj, variables, indent, 0) + "\n"


def write_json(path, obj, variables=None):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps(obj, variables))


def write_csv(path, header, rows):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(
                str(int(v)) if isinstance(v, (int, np.integer)) and not isinstance(v, bool)
                else format_float(v) for v in row) + "\n")


def decomposition_report(d, variables=None, strictly_orthogonal=None):
    """JSON-ready dict for a decomposition; exact parts are rational strings."""
    residual = -d.potential.gradient() + d.rotational - d.field
    return {
        "field": d.field,
        "potential": d.potential,
        "rotational": d.rotational,
        "divergence_residual": d.rotational.divergence(),
        "decomposition_residual": residual,
        "strictly_orthogonal": (d.orthogonality_defect().is_zero()
                                if strictly_orthogonal is None else strictly_orthogonal),
    }
