"""JSON (de)serialization of sequences, operators, frames and synthesis requests.

Sequence spec::

    {"head": [...], "tail": {"kind": "none" | "constant" | "generator",
                             "constant": 1.5,
                             "generator": {"name": "alternating", "params": {...}},
                             "meta": {"limsup": ..., "liminf": ...}}}

A bare JSON list is read as a finite sequence.  For generator tails the
metadata comes from the registry; any ``meta`` given in the file is checked
against it.  An empty head for a generator tail is filled with the rule's
first entry.

Operator spec: ``{"kind": "matrix", "data": [[...]]}`` or
``{"kind": "diagonal", "sequence": <sequence spec>}``.  A diagonal with a
finite sequence is a finite matrix.

Frame file: ``{"dim": n, "vectors": [[...], ...]}`` with one vector per row;
optional ``operator`` and ``norms`` keys record the target pair.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .errors import InvalidSpec
from .frames import Frame
from .operators import DiagonalOperator, FiniteHermitian
from .sequences import ConstantTail, GeneratorTail, SequenceModel

SYNTHESIS_MODES = ("finite", "truncated", "head", "greedy")


def load_json(source):
    """Parse ``source`` as inline JSON if it looks like JSON, else read it as a file."""
    if isinstance(source, (dict, list)):
        return source
    text = str(source).strip()
    if text[:1] not in ("{", "["):
        path = Path(text)
        if not path.is_file():
            raise InvalidSpec(f"no such file: {text}")
        text = path.read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidSpec(f"malformed JSON: {exc}") from None


def _require(obj, key, where):
    if not isinstance(obj, dict) or key not in obj:
        raise InvalidSpec(f"{where}: missing key {key!r}")
    return obj[key]


def _real_list(values, where):
    try:
        arr = np.asarray(values, dtype=float)
    except (TypeError, ValueError):
        raise InvalidSpec(f"{where}: expected a list of numbers") from None
    if arr.ndim != 1:
        raise InvalidSpec(f"{where}: expected a flat list of numbers")
    return arr


def parse_sequence(spec):
    """Build a :class:`SequenceModel` from a sequence spec."""
    spec = load_json(spec)
    if isinstance(spec, list):
        return SequenceModel(_real_list(spec, "sequence"))
    if not isinstance(spec, dict):
        raise InvalidSpec("sequence spec must be an object or a list")
    unknown = set(spec) - {"head", "tail"}
    if unknown:
        raise InvalidSpec(f"sequence spec: unknown keys {sorted(unknown)}")
    head = _real_list(spec.get("head", []), "sequence head")
    tail = spec.get("tail") or {"kind": "none"}
    kind = _require(tail, "kind", "sequence tail")
    if kind == "none":
        return SequenceModel(head)
    if kind == "constant":
        value = float(_require(tail, "constant", "constant tail"))
        if head.size == 0:
            head = np.array([value])
        return SequenceModel(head, ConstantTail(value))
    if kind == "generator":
        gen = _require(tail, "generator", "generator tail")
        name = _require(gen, "name", "generator")
        params = gen.get("params", {}) or {}
        model = SequenceModel.from_generator(name, head=head if head.size else None, **params)
        _check_declared_meta(model, tail.get("meta") or {})
        return model
    raise InvalidSpec(f"unknown tail kind {kind!r}")


def _check_declared_meta(model, declared):
    meta = model.tail.meta
    for key in ("limsup", "liminf", "bound"):
        if key in declared:
            got = float(declared[key])
            want = getattr(meta, key)
            if not math.isclose(got, want, rel_tol=1e-12, abs_tol=1e-12):
                raise InvalidSpec(f"declared {key}={got} disagrees with generator value {want}")


def sequence_to_dict(model):
    d = {"head": model.head.tolist()}
    if model.tail is None:
        d["tail"] = {"kind": "none"}
    elif isinstance(model.tail, ConstantTail):
        d["tail"] = {"kind": "constant", "constant": model.tail.value}
    elif isinstance(model.tail, GeneratorTail):
        meta = model.tail.meta
        d["tail"] = {
            "kind": "generator",
            "generator": {"name": model.tail.name, "params": model.tail.params},
            "meta": {"limsup": meta.limsup, "liminf": meta.liminf, "bound": meta.bound},
        }
    return d


def parse_operator(spec):
    """Build a :class:`FiniteHermitian` or :class:`DiagonalOperator` from an operator spec."""
    spec = load_json(spec)
    kind = _require(spec, "kind", "operator spec")
    if kind == "matrix":
        data = np.asarray(_require(spec, "data", "matrix operator"), dtype=float)
        return FiniteHermitian(data)
    if kind == "diagonal":
        seq = parse_sequence(_require(spec, "sequence", "diagonal operator"))
        if seq.is_finite:
            return FiniteHermitian.from_diagonal(seq.head)
        return DiagonalOperator(seq)
    raise InvalidSpec(f"unknown operator kind {kind!r}")


def operator_to_dict(S):
    if isinstance(S, FiniteHermitian):
        return {"kind": "matrix", "data": S.matrix.tolist()}
    return {"kind": "diagonal", "sequence": sequence_to_dict(S.diag)}


def parse_frame(spec):
    """Return ``(frame, operator or None, norms or None)`` from a frame file."""
    spec = load_json(spec)
    vectors = np.asarray(_require(spec, "vectors", "frame file"), dtype=float)
    F = Frame(vectors)
    if "dim" in spec and int(spec["dim"]) != F.dim:
        raise InvalidSpec(f"frame file declares dim {spec['dim']} but vectors have length {F.dim}")
    S = parse_operator(spec["operator"]) if "operator" in spec else None
    c = _real_list(spec["norms"], "frame norms") if "norms" in spec else None
    return F, S, c


def frame_to_dict(F, S=None, c=None):
    d = F.to_dict()
    if S is not None:
        d["operator"] = operator_to_dict(S)
    if c is not None:
        d["norms"] = np.asarray(c, dtype=float).tolist()
    return d


def parse_synthesis_request(spec):
    """Validate a synthesis request and return it as a plain dict of parsed objects."""
    spec = load_json(spec)
    S = parse_operator(_require(spec, "operator", "synthesis request"))
    c = parse_sequence(_require(spec, "sequence", "synthesis request"))
    mode = spec.get("mode", "finite")
    if mode not in SYNTHESIS_MODES:
        raise InvalidSpec(f"unknown synthesis mode {mode!r}; expected one of {SYNTHESIS_MODES}")
    req = {"operator": S, "sequence": c, "mode": mode}
    for key, cast in (("N", int), ("steps", int), ("tol", float), ("horizon", int)):
        if spec.get(key) is not None:
            req[key] = cast(spec[key])
    if mode == "truncated" and "N" not in req:
        raise InvalidSpec("truncated synthesis needs N")
    return req


def dump(obj, path=None):
    text = json.dumps(obj, indent=2)
    if path is None:
        return text
    Path(path).write_text(text + "\n")
    return text
