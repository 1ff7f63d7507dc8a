"""JSON algebra documents (format tag ``nilgeo-algebra/1``).

Indices are one-based.  Every coefficient is scalar text (``"3/2"``,
``"-1/3i"``); structure matrices and the metric are lists of rows.  The
grammar is described in ``docs/format.md``.
"""

from __future__ import annotations

import json
import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from nilgeo.errors import DocumentError, ScalarParseError
from nilgeo.hypercomplex import HypercomplexStructure
from nilgeo.lie import LieAlgebra
from nilgeo.linalg import ExactMatrix
from nilgeo.scalars import emit_scalar, parse_scalar

__all__ = ["FORMAT", "AlgebraDocument", "emit_document", "from_entry", "load", "parse_document"]

FORMAT = "nilgeo-algebra/1"
TOP_KEYS = ("format", "name", "dim", "basis", "brackets", "I", "J", "K", "metric", "expect")
REQUIRED = ("format", "name", "dim", "brackets")
EXPECT_KEYS = ("nilpotency_step", "abelian", "hkt")
STRUCTURES = ("I", "J", "K")


@dataclass
class AlgebraDocument:
    """Parsed document; ``brackets`` uses zero-based ``{(i, j): {k: c}}``
    with ``i < j``."""

    name: str
    dim: int
    basis: tuple
    brackets: dict
    structures: dict = field(default_factory=dict)
    metric: Optional[ExactMatrix] = None
    expect: dict = field(default_factory=dict)

    def algebra(self) -> LieAlgebra:
        return LieAlgebra(self.dim, self.brackets, self.basis, name=self.name)

    def has_triple(self) -> bool:
        return all(s in self.structures for s in STRUCTURES)

    def hypercomplex(self, g: Optional[LieAlgebra] = None) -> HypercomplexStructure:
        g = g if g is not None else self.algebra()
        return HypercomplexStructure(g, *(self.structures[s] for s in STRUCTURES))


def _rational(text, where: str) -> Fraction:
    if not isinstance(text, str):
        raise DocumentError("coefficient must be scalar text (a JSON string)", where)
    try:
        value = parse_scalar(text)
    except ScalarParseError as exc:
        raise DocumentError(str(exc), where) from None
    if value.im:
        raise DocumentError("coefficient must be rational", where)
    return value.re


def _index(value, dim: int, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise DocumentError("index must be an integer", where)
    if not 1 <= value <= dim:
        raise DocumentError(f"index out of range: {value} not in 1..{dim}", where)
    return value - 1


def _check_keys(obj, allowed, where: str) -> None:
    if not isinstance(obj, dict):
        raise DocumentError("expected an object", where)
    for key in obj:
        if key not in allowed:
            raise DocumentError(f"unknown field {key!r}", f"{where}.{key}")


def _matrix(rows, dim: int, where: str) -> ExactMatrix:
    if not isinstance(rows, list) or len(rows) != dim:
        raise DocumentError(f"matrix must have {dim} rows", where)
    out = []
    for r, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != dim:
            raise DocumentError(f"row must have {dim} entries", f"{where}[{r}]")
        out.append([_rational(x, f"{where}[{r}][{c}]") for c, x in enumerate(row)])
    return ExactMatrix(out)


def _parse_expect(obj, where: str) -> dict:
    _check_keys(obj, EXPECT_KEYS, where)
    out = {}
    if "nilpotency_step" in obj:
        v = obj["nilpotency_step"]
        if v is not None and (isinstance(v, bool) or not isinstance(v, int) or v < 1):
            raise DocumentError("nilpotency_step must be a positive integer or null", f"{where}.nilpotency_step")
        out["nilpotency_step"] = v
    if "abelian" in obj:
        ab = obj["abelian"]
        _check_keys(ab, STRUCTURES, f"{where}.abelian")
        for k, v in ab.items():
            if not isinstance(v, bool):
                raise DocumentError("expected a boolean", f"{where}.abelian.{k}")
        out["abelian"] = dict(ab)
    if "hkt" in obj:
        if not isinstance(obj["hkt"], bool):
            raise DocumentError("expected a boolean", f"{where}.hkt")
        out["hkt"] = obj["hkt"]
    return out


def parse_document(text: str) -> AlgebraDocument:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None
    _check_keys(raw, TOP_KEYS, "$")
    for key in REQUIRED:
        if key not in raw:
            raise DocumentError(f"missing required field {key!r}", "$")
    if raw["format"] != FORMAT:
        raise DocumentError(f"unsupported format {raw['format']!r}; expected {FORMAT!r}", "$.format")
    name = raw["name"]
    if not isinstance(name, str):
        raise DocumentError("name must be a string", "$.name")
    dim = raw["dim"]
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
        raise DocumentError("dim must be a positive integer", "$.dim")
    basis = raw.get("basis", [f"e{i + 1}" for i in range(dim)])
    if not isinstance(basis, list) or len(basis) != dim or not all(isinstance(b, str) for b in basis):
        raise DocumentError(f"basis must list {dim} names", "$.basis")
    if len(set(basis)) != dim:
        raise DocumentError("basis names must be distinct", "$.basis")

    records = raw["brackets"]
    if not isinstance(records, list):
        raise DocumentError("brackets must be a list", "$.brackets")
    brackets: dict = {}
    for n, rec in enumerate(records):
        where = f"$.brackets[{n}]"
        _check_keys(rec, ("x", "y", "terms"), where)
        for key in ("x", "y", "terms"):
            if key not in rec:
                raise DocumentError(f"missing field {key!r}", where)
        x = _index(rec["x"], dim, f"{where}.x")
        y = _index(rec["y"], dim, f"{where}.y")
        if x >= y:
            raise DocumentError("bracket records need x < y", where)
        if (x, y) in brackets:
            raise DocumentError(f"duplicate bracket record for ({x + 1}, {y + 1})", where)
        if not isinstance(rec["terms"], list):
            raise DocumentError("terms must be a list", f"{where}.terms")
        terms: dict = {}
        for t, term in enumerate(rec["terms"]):
            tw = f"{where}.terms[{t}]"
            _check_keys(term, ("k", "coeff"), tw)
            if "k" not in term or "coeff" not in term:
                raise DocumentError("term needs 'k' and 'coeff'", tw)
            k = _index(term["k"], dim, f"{tw}.k")
            if k in terms:
                raise DocumentError(f"duplicate term index {k + 1}", tw)
            terms[k] = _rational(term["coeff"], f"{tw}.coeff")
        brackets[(x, y)] = {k: c for k, c in terms.items() if c}
    brackets = {k: v for k, v in brackets.items() if v}

    structures = {s: _matrix(raw[s], dim, f"$.{s}") for s in STRUCTURES if s in raw}
    metric = None
    if "metric" in raw:
        metric = _matrix(raw["metric"], dim, "$.metric")
        pair = metric.first_asymmetric_pair()
        if pair is not None:
            i, j = pair
            raise DocumentError(
                f"metric is not symmetric: entries ({i + 1},{j + 1}) and ({j + 1},{i + 1}) differ", "$.metric"
            )
    expect = _parse_expect(raw["expect"], "$.expect") if "expect" in raw else {}
    return AlgebraDocument(name, dim, tuple(basis), brackets, structures, metric, expect)


def _emit_matrix(M: ExactMatrix) -> list:
    return [[emit_scalar(x) for x in row] for row in M.rows]


_FLAT_ARRAY = re.compile(r"\[\s+([^\[\]{}]*?)\s+\]")
_FLAT_OBJECT = re.compile(r"\{\s+([^\[\]{}]*?)\s+\}")


def _compact(text: str) -> str:
    """Put arrays and objects without nested containers on one line."""

    def join(m, open_, close):
        return open_ + re.sub(r"\s*\n\s*", " ", m.group(1)) + close

    text = _FLAT_OBJECT.sub(lambda m: join(m, "{", "}"), text)
    return _FLAT_ARRAY.sub(lambda m: join(m, "[", "]"), text)


def emit_document(doc: AlgebraDocument) -> str:
    out: dict = {"format": FORMAT, "name": doc.name, "dim": doc.dim, "basis": list(doc.basis)}
    out["brackets"] = [
        {"x": i + 1, "y": j + 1, "terms": [{"k": k + 1, "coeff": emit_scalar(c)} for k, c in sorted(row.items())]}
        for (i, j), row in sorted(doc.brackets.items())
    ]
    for s in STRUCTURES:
        if s in doc.structures:
            out[s] = _emit_matrix(doc.structures[s])
    if doc.metric is not None:
        out["metric"] = _emit_matrix(doc.metric)
    if doc.expect:
        out["expect"] = {k: doc.expect[k] for k in EXPECT_KEYS if k in doc.expect}
    return _compact(json.dumps(out, indent=2)) + "\n"


def from_entry(entry) -> AlgebraDocument:
    """Document for a :class:`nilgeo.catalog.CatalogEntry`."""
    g = entry.algebra
    return AlgebraDocument(
        entry.name, g.dim, g.basis_names, g.structure_constants,
        dict(entry.structures), entry.metric, dict(entry.manifest),
    )


def load(source: str) -> AlgebraDocument:
    """Read ``source``: a path, ``-`` for stdin, or ``catalog:NAME``."""
    if source.startswith("catalog:"):
        from nilgeo import catalog

        try:
            return from_entry(catalog.get(source.split(":", 1)[1]))
        except KeyError as exc:
            raise DocumentError(str(exc.args[0]), "catalog") from None
    try:
        text = sys.stdin.read() if source == "-" else open(source, encoding="utf-8").read()
    except OSError as exc:
        raise DocumentError(exc.strerror or str(exc), source) from None
    return parse_document(text)
