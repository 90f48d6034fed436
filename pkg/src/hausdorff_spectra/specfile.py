"""JSON spec files in, canonical result documents out."""

from __future__ import annotations

import csv
import hashlib
import io
import json
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .errors import SpecFileError, SpecValidationError
from .families import CustomTailFamily, Family, FiniteFamily, GeometricPrimeFamily
from .model import ExactPower, OperatorSpec, make_entry, validate_spec

SCHEMA_VERSION = "1"

_TOP = {"schema_version", "dimension", "entries", "generator"}
_ENTRY = {"k", "c", "matrix", "exact"}
_EXACT = {"sign", "base", "num", "den"}
_GENERATORS = {
    "geometric-prime": {"ratio", "scale"},
    "custom-tail": {"tail_constant", "tail_ratio"},
}


def _fields(obj, allowed, required, where):
    if not isinstance(obj, dict):
        raise SpecFileError(where, "expected an object")
    extra = sorted(set(obj) - allowed)
    if extra:
        raise SpecFileError(where, f"unknown field(s) {extra}")
    missing = sorted(required - set(obj))
    if missing:
        raise SpecFileError(where, f"missing field(s) {missing}")


def _int(value, where):
    if isinstance(value, bool) or not isinstance(value, int):
        raise SpecFileError(where, "expected an integer")
    return value


def _real(value, where):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SpecFileError(where, "expected a number")
    return float(value)


@dataclass
class SpecDocument:
    """A parsed spec file: an explicit operator, or a named infinite family."""

    dimension: int
    spec: OperatorSpec | None = None
    family: Family | None = None
    raw: dict = field(default_factory=dict)
    digest: str = ""

    def operator(self, order: int | None = None) -> OperatorSpec:
        """The explicit operator, or the truncation H^(n) of the generator."""
        if self.family is not None:
            return self.family.truncation(order if order is not None else 10)
        return self.spec

    def as_family(self) -> Family:
        return self.family if self.family is not None else FiniteFamily(self.spec)


def _parse_entry(e, d, where):
    _fields(e, _ENTRY, {"k", "c", "matrix"}, where)
    k = _int(e["k"], f"{where}.k")
    c = e["c"]
    if not isinstance(c, list) or len(c) != 2:
        raise SpecFileError(f"{where}.c", "expected [re, im]")
    coeff = complex(_real(c[0], f"{where}.c[0]"), _real(c[1], f"{where}.c[1]"))
    mat = e["matrix"]
    if not isinstance(mat, list) or len(mat) != d * d:
        raise SpecFileError(f"{where}.matrix", f"expected {d * d} row-major reals")
    matrix = np.array([_real(v, f"{where}.matrix[{i}]") for i, v in enumerate(mat)]).reshape(d, d)
    exact = None
    if "exact" in e:
        ex = e["exact"]
        if not isinstance(ex, list) or len(ex) != d:
            raise SpecFileError(f"{where}.exact", f"expected {d} exact eigenvalues")
        exact = []
        for i, item in enumerate(ex):
            w = f"{where}.exact[{i}]"
            _fields(item, _EXACT, _EXACT, w)
            try:
                exact.append(ExactPower(_int(item["sign"], w + ".sign"), _int(item["base"], w + ".base"),
                                        _int(item["num"], w + ".num"), _int(item["den"], w + ".den")))
            except ValueError as err:
                raise SpecFileError(w, str(err)) from None
    try:
        return make_entry(k, coeff, matrix, exact, dimension=d)
    except ValueError as err:
        raise SpecFileError(where, str(err)) from None


def _locate(err, entries):
    k = getattr(err, "k", getattr(err, "i", None))
    for pos, e in enumerate(entries):
        if e.k == k:
            return f"$.entries[{pos}]"
    return "$.entries"


def parse_spec(data: dict, digest: str = "") -> SpecDocument:
    _fields(data, _TOP, {"schema_version", "dimension"}, "$")
    if data["schema_version"] != SCHEMA_VERSION:
        raise SpecFileError("$.schema_version", f"unsupported version {data['schema_version']!r}")
    d = _int(data["dimension"], "$.dimension")
    if d < 1:
        raise SpecFileError("$.dimension", "must be at least 1")
    raw_entries = data.get("entries", [])
    if not isinstance(raw_entries, list):
        raise SpecFileError("$.entries", "expected a list")
    entries = [_parse_entry(e, d, f"$.entries[{i}]") for i, e in enumerate(raw_entries)]
    gen = data.get("generator")
    if gen is None:
        if not entries:
            raise SpecFileError("$", "need entries or a generator")
        try:
            spec = validate_spec(d, entries)
        except SpecValidationError as err:
            raise SpecFileError(_locate(err, entries), str(err)) from None
        return SpecDocument(d, spec=spec, raw=data, digest=digest)
    _fields(gen, {"name", "parameters"}, {"name"}, "$.generator")
    name = gen["name"]
    if name not in _GENERATORS:
        raise SpecFileError("$.generator.name", f"unknown generator {name!r}")
    params = gen.get("parameters", {})
    _fields(params, _GENERATORS[name], set(), "$.generator.parameters")
    vals = {key: _real(v, f"$.generator.parameters.{key}") for key, v in params.items()}
    if name == "geometric-prime":
        if entries:
            raise SpecFileError("$.entries", "geometric-prime takes no explicit entries")
        family = GeometricPrimeFamily(vals.get("ratio", 0.5), vals.get("scale", 1.0), dimension=d)
    else:
        if not entries:
            raise SpecFileError("$.entries", "custom-tail needs the listed entries")
        try:
            validate_spec(d, entries)
        except SpecValidationError as err:
            raise SpecFileError(_locate(err, entries), str(err)) from None
        family = CustomTailFamily(d, entries, vals.get("tail_constant"), vals.get("tail_ratio"))
    return SpecDocument(d, family=family, raw=data, digest=digest)


def load_spec(path) -> SpecDocument:
    with open(path, "rb") as fh:
        blob = fh.read()
    try:
        data = json.loads(blob)
    except json.JSONDecodeError as err:
        raise SpecFileError(f"line {err.lineno}", err.msg) from None
    return parse_spec(data, hashlib.sha256(blob).hexdigest())


def spec_to_dict(spec: OperatorSpec) -> dict:
    """Inverse of ``parse_spec`` for explicit operators."""
    entries = []
    for e in spec.entries:
        item = {"k": e.k, "c": [e.coefficient.real, e.coefficient.imag],
                "matrix": [float(v) for v in e.matrix.ravel()]}
        if e.exact_eigenvalues:
            item["exact"] = [{"sign": x.sign, "base": x.base, "num": x.num, "den": x.den}
                             for x in e.exact_eigenvalues]
        entries.append(item)
    return {"schema_version": SCHEMA_VERSION, "dimension": spec.dimension, "entries": entries}


def _plain(obj):
    """Recursively convert numpy and complex values into JSON-ready data."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    return obj


@dataclass
class ResultDocument:
    operation: str
    parameters: dict
    outputs: dict
    input_digest: str = ""
    seed: int = 0
    passed: bool | None = None

    def to_dict(self) -> dict:
        out = {"schema_version": SCHEMA_VERSION, "operation": self.operation,
               "input_digest": self.input_digest, "parameters": _plain(self.parameters),
               "outputs": _plain(self.outputs),
               "provenance": {"tool": "hausdorff-spectra", "version": __version__, "seed": self.seed}}
        if self.passed is not None:
            out["passed"] = self.passed
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=1, allow_nan=False) + "\n"

    def to_csv(self) -> str:
        """The first point cloud found in the outputs as re,im rows."""
        cloud = _find_cloud(self.outputs)
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["re", "im"])
        for re, im in cloud:
            writer.writerow([repr(float(re)), repr(float(im))])
        return buf.getvalue()


def _find_cloud(outputs):
    for key in ("points", "cloud"):
        if key in outputs:
            return _plain(outputs[key])
    for v in outputs.values():
        if isinstance(v, dict):
            try:
                return _find_cloud(v)
            except KeyError:
                continue
    raise KeyError("no point cloud in this result")
