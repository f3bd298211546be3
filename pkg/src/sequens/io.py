"""JSON documents for matrices, effects, states, observables, channels and tables.

Every document is an object with a ``"kind"`` discriminator. Complex numbers
are ``[re, im]`` pairs, matrices are row-major nested arrays, and floats are
written with 17 significant digits, so ``parse_document(serialize_document(x))``
reproduces ``x`` bit for bit and re-serializing gives identical text.

Example observable::

    {
      "kind": "observable",
      "dim": 2,
      "entries": [
        {"label": "up", "value": 1, "matrix": [[[1, 0], [0, 0]], [[0, 0], [0, 0]]]},
        ...
      ]
    }
"""

import json
import math

import numpy as np

from .effects import Effect, PartialState, PureState, State
from .errors import ParseError
from .harness import CheckReport
from .observables import ClassicalChannel, Observable, Outcome
from .spectral import SelfAdjointOperator

__all__ = ["parse_document", "serialize_document", "load", "dump", "KINDS"]

KINDS = (
    "matrix",
    "effect",
    "state",
    "partial-state",
    "pure-state",
    "observable",
    "channel",
    "function-table",
    "scalar",
    "check-report",
)


# ---------------------------------------------------------------------------
# writing


def _num(x) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite number {x!r}")
    return format(x, ".17g")


def _str(s) -> str:
    return json.dumps(s, ensure_ascii=False)


def _complex(z) -> str:
    return f"[{_num(z.real)}, {_num(z.imag)}]"


def _matrix_lines(m, indent):
    pad = " " * indent
    rows = [pad + "  [" + ", ".join(_complex(z) for z in row) + "]" for row in m]
    return "[\n" + ",\n".join(rows) + "\n" + pad + "]"


def _outcome_fields(o: Outcome) -> str:
    value = "null" if o.value is None else _num(o.value)
    return f'"label": {_str(o.label)}, "value": {value}'


def _object(fields, indent=0):
    pad = " " * (indent + 2)
    body = ",\n".join(f"{pad}{_str(k)}: {v}" for k, v in fields)
    return "{\n" + body + "\n" + " " * indent + "}"


def serialize_document(obj) -> str:
    """Serialize a domain object to document text (with trailing newline)."""
    if isinstance(obj, Observable):
        entries = []
        for o, a in obj:
            entries.append(
                "    {" + _outcome_fields(o) + ', "matrix": ' + _matrix_lines(a.matrix, 4) + "}"
            )
        fields = [
            ("kind", _str("observable")),
            ("dim", str(obj.dim)),
            ("entries", "[\n" + ",\n".join(entries) + "\n  ]"),
        ]
    elif isinstance(obj, ClassicalChannel):
        rows = ["    [" + ", ".join(_num(p) for p in r) + "]" for r in obj.probs]
        fields = [
            ("kind", _str("channel")),
            ("rows", "[" + ", ".join(_str(r) for r in obj.rows) + "]"),
            ("cols", "[" + ", ".join("{" + _outcome_fields(c) + "}" for c in obj.cols) + "]"),
            ("probs", "[\n" + ",\n".join(rows) + "\n  ]"),
        ]
    elif isinstance(obj, PureState):
        fields = [
            ("kind", _str("pure-state")),
            ("dim", str(obj.dim)),
            ("vector", "[" + ", ".join(_complex(z) for z in obj.vector) + "]"),
        ]
    elif isinstance(obj, (Effect, PartialState, SelfAdjointOperator, np.ndarray)):
        if isinstance(obj, Effect):
            kind = "effect"
        elif isinstance(obj, State):
            kind = "state"
        elif isinstance(obj, PartialState):
            kind = "partial-state"
        else:
            kind = "matrix"
        m = np.asarray(obj, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"cannot serialize array of shape {m.shape}")
        fields = [("kind", _str(kind)), ("dim", str(m.shape[0])), ("matrix", _matrix_lines(m, 2))]
    elif isinstance(obj, dict):
        items = ["    {" + f'"label": {_str(str(k))}, "value": {_num(v)}' + "}" for k, v in obj.items()]
        fields = [("kind", _str("function-table")), ("table", "[\n" + ",\n".join(items) + "\n  ]")]
    elif isinstance(obj, CheckReport) or (isinstance(obj, list) and all(isinstance(r, CheckReport) for r in obj)):
        reports = [obj] if isinstance(obj, CheckReport) else obj
        results = []
        for r in reports:
            d = r.as_dict()
            results.append(
                "    {"
                + f'"theorem_id": {_str(d["theorem_id"])}, "trials": {d["trials"]}, '
                + f'"max_deviation": {_num(d["max_deviation"])}, "worst_case_seed": {d["worst_case_seed"]}, '
                + f'"tolerance": {_num(d["tolerance"])}, "passed": {"true" if d["passed"] else "false"}'
                + "}"
            )
        fields = [
            ("kind", _str("check-report")),
            ("passed", "true" if all(r.passed for r in reports) else "false"),
            ("results", "[\n" + ",\n".join(results) + "\n  ]"),
        ]
    elif isinstance(obj, (int, float, np.floating, np.integer)) and not isinstance(obj, bool):
        fields = [("kind", _str("scalar")), ("value", _num(obj))]
    else:
        raise TypeError(f"no document kind for {type(obj).__name__}")
    return _object(fields) + "\n"


def _value(v, indent):
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "null"
    if isinstance(v, str):
        return _str(v)
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return _num(v)
    if isinstance(v, np.ndarray):
        return _matrix_lines(v, indent)
    if isinstance(v, dict):
        return _object([(k, _value(x, indent + 2)) for k, x in v.items()], indent)
    if isinstance(v, (list, tuple)):
        pad = " " * (indent + 2)
        return "[\n" + ",\n".join(pad + _value(x, indent + 2) for x in v) + "\n" + " " * indent + "]"
    raise TypeError(f"cannot serialize {type(v).__name__}")


def serialize_record(kind, fields) -> str:
    """Output-only document: ``kind`` plus arbitrary numeric/matrix fields."""
    return _object([("kind", _str(kind))] + [(k, _value(v, 2)) for k, v in fields.items()]) + "\n"


# ---------------------------------------------------------------------------
# reading


def _parse_int(s):
    # keep the sign of "-0" so that re-serializing is byte-identical
    return -0.0 if s == "-0" else int(s)


def _reject_constant(name):
    raise ParseError(f"non-finite literal {name} is not allowed")


def _field(doc, key, path):
    if not isinstance(doc, dict) or key not in doc:
        raise ParseError(f"missing field {key!r}", path or "<root>")
    return doc[key]


def _real(x, path):
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ParseError(f"expected a number, got {x!r}", path)
    return float(x)


def _complex_entry(z, path):
    if isinstance(z, list):
        if len(z) != 2:
            raise ParseError("complex numbers are [re, im] pairs", path)
        return complex(_real(z[0], f"{path}[0]"), _real(z[1], f"{path}[1]"))
    return complex(_real(z, path), 0.0)


def _matrix(raw, dim, path):
    if not isinstance(raw, list) or len(raw) != dim:
        raise ParseError(f"expected {dim} rows", path)
    out = np.empty((dim, dim), dtype=np.complex128)
    for i, row in enumerate(raw):
        if not isinstance(row, list) or len(row) != dim:
            raise ParseError(f"expected {dim} entries", f"{path}[{i}]")
        for j, z in enumerate(row):
            out[i, j] = _complex_entry(z, f"{path}[{i}][{j}]")
    return out


def _dim(doc):
    d = _field(doc, "dim", "")
    if isinstance(d, bool) or not isinstance(d, (int, float)) or d != int(d) or d < 1:
        raise ParseError(f"dim must be a positive integer, got {d!r}", "dim")
    return int(d)


def _outcome(raw, path):
    label = _field(raw, "label", path)
    if not isinstance(label, str):
        raise ParseError("label must be a string", f"{path}.label")
    value = raw.get("value")
    return Outcome(label, None if value is None else _real(value, f"{path}.value"))


def _from_dict(doc):
    kind = _field(doc, "kind", "")
    if kind in ("matrix", "effect", "state", "partial-state"):
        m = _matrix(_field(doc, "matrix", ""), _dim(doc), "matrix")
        return {"matrix": lambda x: x, "effect": Effect, "state": State, "partial-state": PartialState}[kind](m)
    if kind == "pure-state":
        d = _dim(doc)
        raw = _field(doc, "vector", "")
        if not isinstance(raw, list) or len(raw) != d:
            raise ParseError(f"expected {d} components", "vector")
        return PureState([_complex_entry(z, f"vector[{i}]") for i, z in enumerate(raw)])
    if kind == "observable":
        d = _dim(doc)
        raw = _field(doc, "entries", "")
        if not isinstance(raw, list):
            raise ParseError("entries must be a list", "entries")
        entries = []
        for i, e in enumerate(raw):
            path = f"entries[{i}]"
            entries.append((_outcome(e, path), _matrix(_field(e, "matrix", path), d, f"{path}.matrix")))
        return Observable(entries)
    if kind == "channel":
        rows = _field(doc, "rows", "")
        if not isinstance(rows, list) or not all(isinstance(r, str) for r in rows):
            raise ParseError("rows must be a list of labels", "rows")
        cols_raw = _field(doc, "cols", "")
        if not isinstance(cols_raw, list):
            raise ParseError("cols must be a list", "cols")
        cols = [_outcome(c, f"cols[{j}]") for j, c in enumerate(cols_raw)]
        probs_raw = _field(doc, "probs", "")
        if not isinstance(probs_raw, list) or len(probs_raw) != len(rows):
            raise ParseError(f"expected {len(rows)} rows", "probs")
        probs = []
        for i, r in enumerate(probs_raw):
            if not isinstance(r, list) or len(r) != len(cols):
                raise ParseError(f"expected {len(cols)} entries", f"probs[{i}]")
            probs.append([_real(p, f"probs[{i}][{j}]") for j, p in enumerate(r)])
        return ClassicalChannel(rows, cols, np.array(probs, dtype=float).reshape(len(rows), len(cols)))
    if kind == "function-table":
        raw = _field(doc, "table", "")
        if not isinstance(raw, list):
            raise ParseError("table must be a list", "table")
        table = {}
        for i, e in enumerate(raw):
            o = _outcome(e, f"table[{i}]")
            if o.value is None:
                raise ParseError("function values must be numbers", f"table[{i}].value")
            if o.label in table:
                raise ParseError(f"label {o.label!r} repeated", f"table[{i}].label")
            table[o.label] = o.value
        return table
    if kind == "scalar":
        return _real(_field(doc, "value", ""), "value")
    raise ParseError(f"unknown document kind {kind!r}", "kind")


def parse_document(text):
    """Parse document text into its domain object (validated)."""
    try:
        doc = json.loads(text, parse_int=_parse_int, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", f"line {exc.lineno} column {exc.colno}") from None
    return _from_dict(doc)


def load(path):
    with open(path, encoding="utf-8") as fh:
        return parse_document(fh.read())


def dump(obj, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_document(obj))
