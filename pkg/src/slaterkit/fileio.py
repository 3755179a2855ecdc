"""Problem and point files, and deterministic JSON reports.

Problem files are UTF-8 JSON objects with keys ``p`` (number or the string
``"inf"``), ``weights``, ``lower``/``upper`` (arrays whose entries are
numbers or the strings ``"-inf"``/``"inf"``), ``ineq`` (array of
``{"g": [...], "a": num}``), ``eq`` (array of ``{"h": [...], "b": num}``),
optional ``quad_ineq`` (array of ``{"Q": [[...]], "q": [...], "c": num}``)
and optional ``objective_gradient`` or ``objective_linear`` arrays.  Point
files are bare JSON arrays.

Report serialization is canonical: keys sorted, floats printed with 17
significant digits, infinities and NaNs as quoted strings.  Identical
inputs therefore produce byte-identical reports.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .errors import FileFormatError
from .model import MeasureSpace, Problem, QuadraticConstraint

__all__ = [
    "load_problem",
    "load_point",
    "problem_to_dict",
    "canonical_json",
]


def _number(v, field: str) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise FileFormatError(f"field {field!r} must be a number, got {v!r}")
    return float(v)


def _bound_entry(v, field: str) -> float:
    if v == "inf":
        return math.inf
    if v == "-inf":
        return -math.inf
    if isinstance(v, str):
        raise FileFormatError(
            f"field {field!r} allows only the strings \"inf\"/\"-inf\", got {v!r}")
    return _number(v, field)


def _vector(v, field: str, bounds: bool = False) -> np.ndarray:
    if not isinstance(v, list):
        raise FileFormatError(f"field {field!r} must be an array")
    conv = _bound_entry if bounds else _number
    return np.array([conv(e, f"{field}[{k}]") for k, e in enumerate(v)],
                    dtype=float)


def load_problem(path: str):
    """Parse a problem file.

    Returns ``(problem, objective)`` where ``objective`` is ``None`` or a
    dict ``{"kind": "gradient" | "linear", "values": array}``.

    Raises
    ------
    FileFormatError
        With the offending field (or JSON line/column) in the message.
    """
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise FileFormatError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise FileFormatError(
            f"{path}: malformed JSON at line {exc.lineno} column {exc.colno}: "
            f"{exc.msg}") from exc
    if not isinstance(raw, dict):
        raise FileFormatError(f"{path}: top level must be a JSON object")
    for key in ("weights", "lower", "upper"):
        if key not in raw:
            raise FileFormatError(f"{path}: missing required field {key!r}")
    unknown = set(raw) - {"p", "weights", "lower", "upper", "ineq", "eq",
                          "quad_ineq", "objective_gradient", "objective_linear"}
    if unknown:
        raise FileFormatError(f"{path}: unknown field {sorted(unknown)[0]!r}")

    p_raw = raw.get("p", 2)
    p = math.inf if p_raw == "inf" else _number(p_raw, "p")
    weights = _vector(raw["weights"], "weights")
    space = MeasureSpace(weights)
    m = space.size
    lower = _vector(raw["lower"], "lower", bounds=True)
    upper = _vector(raw["upper"], "upper", bounds=True)

    ineq = []
    for k, entry in enumerate(raw.get("ineq", [])):
        if not isinstance(entry, dict) or set(entry) != {"g", "a"}:
            raise FileFormatError(
                f"ineq[{k}] must be an object with exactly the keys g and a")
        ineq.append((_vector(entry["g"], f"ineq[{k}].g"),
                     _number(entry["a"], f"ineq[{k}].a")))
    eq = []
    for k, entry in enumerate(raw.get("eq", [])):
        if not isinstance(entry, dict) or set(entry) != {"h", "b"}:
            raise FileFormatError(
                f"eq[{k}] must be an object with exactly the keys h and b")
        eq.append((_vector(entry["h"], f"eq[{k}].h"),
                   _number(entry["b"], f"eq[{k}].b")))
    nonlinear = []
    for k, entry in enumerate(raw.get("quad_ineq", [])):
        if not isinstance(entry, dict) or set(entry) != {"Q", "q", "c"}:
            raise FileFormatError(
                f"quad_ineq[{k}] must be an object with exactly Q, q, c")
        qmat = entry["Q"]
        if (not isinstance(qmat, list) or len(qmat) != m
                or any(not isinstance(row, list) or len(row) != m for row in qmat)):
            raise FileFormatError(f"quad_ineq[{k}].Q must be a {m}x{m} array")
        Q = np.array([[_number(v, f"quad_ineq[{k}].Q[{i}][{j}]")
                       for j, v in enumerate(row)]
                      for i, row in enumerate(qmat)], dtype=float)
        nonlinear.append(QuadraticConstraint(
            space, Q, _vector(entry["q"], f"quad_ineq[{k}].q"),
            _number(entry["c"], f"quad_ineq[{k}].c")))

    if "objective_gradient" in raw and "objective_linear" in raw:
        raise FileFormatError(
            f"{path}: objective_gradient and objective_linear are exclusive")
    objective = None
    if "objective_gradient" in raw:
        objective = {"kind": "gradient",
                     "values": _vector(raw["objective_gradient"],
                                       "objective_gradient")}
    elif "objective_linear" in raw:
        objective = {"kind": "linear",
                     "values": _vector(raw["objective_linear"],
                                       "objective_linear")}
    if objective is not None and objective["values"].size != m:
        raise FileFormatError(
            f"{path}: objective array has length {objective['values'].size}, "
            f"expected {m}")

    try:
        prob = Problem(space, p, lower, upper, tuple(ineq), tuple(eq),
                       tuple(nonlinear))
    except Exception as exc:
        raise FileFormatError(f"{path}: {exc}") from exc
    return prob, objective


def load_point(path: str) -> np.ndarray:
    """Parse a point file: a bare JSON array of numbers."""
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise FileFormatError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise FileFormatError(
            f"{path}: malformed JSON at line {exc.lineno} column {exc.colno}: "
            f"{exc.msg}") from exc
    if not isinstance(raw, list):
        raise FileFormatError(f"{path}: point file must be a JSON array")
    return np.array([_number(v, f"point[{k}]") for k, v in enumerate(raw)],
                    dtype=float)


def problem_to_dict(prob: Problem, objective=None) -> dict:
    """Problem as a JSON-ready dict in the problem-file schema."""
    out = {
        "p": "inf" if math.isinf(prob.p) else prob.p,
        "weights": prob.space.weights.tolist(),
        "lower": [_bound_out(v) for v in prob.lower],
        "upper": [_bound_out(v) for v in prob.upper],
        "ineq": [{"g": np.asarray(g, dtype=float).tolist(), "a": float(a)}
                 for g, a in prob.ineq],
        "eq": [{"h": np.asarray(h, dtype=float).tolist(), "b": float(b)}
               for h, b in prob.eq],
    }
    if prob.nonlinear:
        quads = []
        for con in prob.nonlinear:
            if not isinstance(con, QuadraticConstraint):
                raise FileFormatError(
                    "only quadratic smooth constraints can be written to a file")
            quads.append({"Q": con.Q.tolist(), "q": con.q.tolist(),
                          "c": float(con.c)})
        out["quad_ineq"] = quads
    if objective is not None:
        key = ("objective_gradient" if objective["kind"] == "gradient"
               else "objective_linear")
        out[key] = np.asarray(objective["values"], dtype=float).tolist()
    return out


def _bound_out(v: float):
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return float(v)


def _emit(obj) -> str:
    if obj is None or isinstance(obj, (bool, str, int)):
        return json.dumps(obj)
    if isinstance(obj, float):
        if math.isnan(obj):
            return '"nan"'
        if math.isinf(obj):
            return '"inf"' if obj > 0 else '"-inf"'
        return format(obj, ".17g")
    if isinstance(obj, np.ndarray):
        return _emit(obj.tolist())
    if isinstance(obj, (np.floating,)):
        return _emit(float(obj))
    if isinstance(obj, (np.integer,)):
        return json.dumps(int(obj))
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(_emit(v) for v in obj) + "]"
    if isinstance(obj, dict):
        items = sorted((str(k), v) for k, v in obj.items())
        return "{" + ",".join(json.dumps(k) + ":" + _emit(v)
                              for k, v in items) + "}"
    raise FileFormatError(f"cannot serialize {type(obj).__name__}")


def canonical_json(obj) -> str:
    """Deterministic JSON text: sorted keys, 17-significant-digit floats,
    infinities as quoted strings, compact separators, trailing newline."""
    return _emit(obj) + "\n"
