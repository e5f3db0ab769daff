"""JSON file formats for databases and bindings.

A database document looks like::

    {"relations": {"B": {"arity": 2, "input_arity": 1,
                         "tuples": [["1", "2"], ["1", "3"]]}}}

A bindings document is a JSON object (one valuation) or an array of objects
(a set of valuations, e.g. the input relation of a plan). All constants are
strings.
"""

from __future__ import annotations

import json
from collections.abc import Iterable, Mapping
from pathlib import Path

from .errors import InputError, SchemaError
from .evaluate import PADDING
from .model import Instance, Schema, Signature, Valuation, is_identifier
from .translate.exfo_to_flif import RESET_CONSTANT

RESERVED = frozenset({PADDING, RESET_CONSTANT})


class FileFormatError(InputError):
    pass


def _load_json(source) -> object:
    try:
        if isinstance(source, Path):
            text = source.read_text(encoding="utf-8")
        else:
            text = source
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"invalid JSON: {exc}") from None


def _constant(c, where: str) -> str:
    if not isinstance(c, str):
        raise FileFormatError(f"{where}: constants must be JSON strings, got {c!r}")
    if c in RESERVED:
        raise FileFormatError(f"{where}: {c!r} is a reserved constant")
    return c


def database_from_json(doc) -> Instance:
    if not isinstance(doc, dict) or not isinstance(doc.get("relations"), dict):
        raise FileFormatError('database must be an object with a "relations" object')
    sigs, rels = {}, {}
    for name, spec in doc["relations"].items():
        if not is_identifier(name):
            raise FileFormatError(f"bad relation name {name!r}")
        if not isinstance(spec, dict):
            raise FileFormatError(f"relation {name}: expected an object")
        try:
            arity, iar = spec["arity"], spec.get("input_arity", 0)
        except KeyError:
            raise FileFormatError(f"relation {name}: missing arity") from None
        if not isinstance(arity, int) or not isinstance(iar, int):
            raise FileFormatError(f"relation {name}: arities must be integers")
        try:
            sigs[name] = Signature(arity, iar)
        except SchemaError as exc:
            raise FileFormatError(f"relation {name}: {exc}") from None
        tuples = spec.get("tuples", [])
        if not isinstance(tuples, list):
            raise FileFormatError(f"relation {name}: tuples must be a list")
        rows = []
        for t in tuples:
            if not isinstance(t, list) or len(t) != arity:
                raise FileFormatError(f"relation {name}: tuple {t!r} does not have arity {arity}")
            rows.append(tuple(_constant(c, f"relation {name}") for c in t))
        rels[name] = rows
    return Instance(Schema(sigs), rels)


def database_to_json(D: Instance) -> dict:
    out = {}
    for name in sorted(D.schema):
        sig = D.schema[name]
        out[name] = {
            "arity": sig.arity,
            "input_arity": sig.input_arity,
            "tuples": [list(t) for t in sorted(D[name])],
        }
    return {"relations": out}


def load_database(path) -> Instance:
    return database_from_json(_load_json(Path(path)))


def _valuation(obj, where: str) -> Valuation:
    if not isinstance(obj, dict):
        raise FileFormatError(f"{where}: expected a JSON object of bindings")
    for k in obj:
        if not is_identifier(k):
            raise FileFormatError(f"{where}: bad variable name {k!r}")
    return Valuation({k: _constant(v, where) for k, v in obj.items()})


def bindings_from_json(doc) -> list[Valuation]:
    """Always a list; a single object yields one valuation."""
    if isinstance(doc, dict):
        return [_valuation(doc, "bindings")]
    if isinstance(doc, list):
        return [_valuation(o, f"bindings[{i}]") for i, o in enumerate(doc)]
    raise FileFormatError("bindings must be an object or an array of objects")


def load_bindings(arg: str) -> list[Valuation]:
    """Inline JSON text (starting with ``{`` or ``[``) or a file path."""
    text = arg.lstrip()
    if text.startswith(("{", "[")):
        return bindings_from_json(_load_json(text))
    return bindings_from_json(_load_json(Path(arg)))


def load_mapping(arg: str) -> dict:
    text = arg.lstrip()
    doc = _load_json(text if text.startswith("{") else Path(arg))
    if not isinstance(doc, dict) or not all(
        isinstance(k, str) and isinstance(v, str) and is_identifier(k) and is_identifier(v)
        for k, v in doc.items()
    ):
        raise FileFormatError("renaming must be a JSON object mapping variables to variables")
    return dict(doc)


def row_json(row: Mapping[str, str]) -> str:
    return json.dumps(dict(sorted(row.items())), ensure_ascii=False)


def rows_table(schema: Iterable[str], rows: list) -> str:
    cols = sorted(schema)
    if not cols:
        lines = ["()"] * len(rows)
    else:
        table = [cols] + [[r[c] for c in cols] for r in rows]
        widths = [max(len(line[i]) for line in table) for i in range(len(cols))]
        lines = [" | ".join(v.ljust(w) for v, w in zip(line, widths)).rstrip() for line in table]
    n = len(rows)
    lines.append(f"({n} row{'s' if n != 1 else ''})")
    return "\n".join(lines)
