"""Structure-definition documents: JSON files naming a chart, an algebroid
and a set of tensors whose coefficients are expression strings.

Example::

    {
      "chart": ["x", "y"],
      "algebroid": {"type": "flat-tangent"},
      "tensors": {
        "H": {"variance": "contravariant", "matrix": [["1", "0"], ["0", "1"]]}
      }
    }

A custom algebroid is given as ``{"type": "custom", "gamma": ..., "anchor": ...}``
with ``gamma[i][j][k]`` the coefficient of e_k in e_i . e_j and ``anchor`` a
(chart size) x rank matrix whose column i is the anchor of e_i.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Union

from .algebroid import Algebroid, Chart, check_axioms, flat_tangent, from_structure
from .errors import ParseError, UnknownTensorName, ValidationError, VarianceMismatch
from .expr import ExprSource, parse_expr
from .matrix import is_symmetric
from .tensors import BundleMap, SymTensorCo, SymTensorContra

VARIANCES = {
    "contravariant": SymTensorContra,
    "covariant": SymTensorCo,
    "endomorphism": BundleMap,
}

Tensor = Union[SymTensorContra, SymTensorCo, BundleMap]


@dataclass
class InputDocument:
    name: str
    chart: Chart
    algebroid: Algebroid
    tensors: dict[str, Tensor]
    description: str = ""
    domain: str = ""
    extra: dict[str, Any] = field(default_factory=dict)

    def tensor(self, name: str, *variances: str) -> Tensor:
        if name not in self.tensors:
            raise UnknownTensorName(name)
        t = self.tensors[name]
        if variances and not isinstance(t, tuple(VARIANCES[v] for v in variances)):
            raise VarianceMismatch(
                f"tensor {name!r} is {variance_of(t)}, expected {' or '.join(variances)}"
            )
        return t


def variance_of(t: Tensor) -> str:
    for name, cls in VARIANCES.items():
        if isinstance(t, cls):
            return name
    raise TypeError(type(t).__name__)


def fixture_names() -> list[str]:
    root = resources.files("kvcert") / "fixtures"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def resolve(path: str | Path) -> tuple[str, str]:
    """Return (display name, file text) for a path or a shipped fixture name."""
    p = Path(path)
    if p.is_file():
        return p.stem, p.read_text(encoding="utf-8")
    stem = p.name[:-5] if p.name.endswith(".json") else p.name
    if stem in fixture_names():
        text = (resources.files("kvcert") / "fixtures" / f"{stem}.json").read_text(encoding="utf-8")
        return stem, text
    raise ValidationError(f"no such file or fixture: {path}")


def _expr(text, source: ExprSource, where: str):
    if not isinstance(text, (str, int)) or isinstance(text, bool):
        raise ValidationError(f"{where}: expected an expression string")
    try:
        return parse_expr(ExprSource(str(text), source.variables))
    except ParseError as exc:
        raise ParseError(f"{where}: {exc.args[0]}", exc.offset) from exc
    except KeyError as exc:
        raise ValidationError(f"{where}: {exc}") from exc


def _matrix(rows, source: ExprSource, where: str, shape: tuple[int, int]):
    if not isinstance(rows, list) or len(rows) != shape[0]:
        raise ValidationError(f"{where}: expected {shape[0]} rows")
    out = []
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != shape[1]:
            raise ValidationError(f"{where}[{i}]: expected {shape[1]} entries")
        out.append(tuple(_expr(c, source, f"{where}[{i}][{j}]") for j, c in enumerate(row)))
    return tuple(out)


def _algebroid(entry, chart: Chart, source: ExprSource) -> Algebroid:
    if not isinstance(entry, dict) or "type" not in entry:
        raise ValidationError("algebroid: expected an object with a 'type' field")
    kind = entry["type"]
    if kind == "flat-tangent":
        return flat_tangent(chart)
    if kind != "custom":
        raise ValidationError(f"algebroid.type: unknown type {kind!r}")
    gamma = entry.get("gamma")
    if not isinstance(gamma, list) or not gamma:
        raise ValidationError("algebroid.gamma: expected a nonempty n x n x n array")
    n = len(gamma)
    planes = tuple(_matrix(p, source, f"algebroid.gamma[{i}]", (n, n)) for i, p in enumerate(gamma))
    anchor = entry.get("anchor")
    if anchor is None and chart.variables:
        raise ValidationError("algebroid.anchor: required when the chart is nonempty")
    anchor = None if anchor is None else _matrix(anchor, source, "algebroid.anchor", (len(chart.variables), n))
    A = from_structure(chart, planes, anchor)
    cert = check_axioms(A)
    if not cert.holds:
        first = cert.residuals[0]
        raise ValidationError(
            f"algebroid: axioms fail ({len(cert.residuals)} residuals, first {first.label}{first.index})"
        )
    return A


def parse_document(data: Any, name: str = "<document>") -> InputDocument:
    if not isinstance(data, dict):
        raise ValidationError("document: expected a JSON object")
    variables = data.get("chart")
    if not isinstance(variables, list) or not all(isinstance(v, str) for v in variables):
        raise ValidationError("chart: expected a list of variable names")
    try:
        source = ExprSource("0", tuple(variables))
        chart = Chart(tuple(variables))
    except ValueError as exc:
        raise ValidationError(f"chart: {exc}") from exc
    A = _algebroid(data.get("algebroid", {"type": "flat-tangent"}), chart, source)

    tensors = {}
    raw = data.get("tensors", {})
    if not isinstance(raw, dict):
        raise ValidationError("tensors: expected an object")
    for tname, entry in raw.items():
        where = f"tensors.{tname}"
        if not isinstance(entry, dict):
            raise ValidationError(f"{where}: expected an object")
        variance = entry.get("variance")
        if variance not in VARIANCES:
            raise ValidationError(f"{where}.variance: expected one of {', '.join(VARIANCES)}")
        m = _matrix(entry.get("matrix"), source, f"{where}.matrix", (A.rank, A.rank))
        if variance != "endomorphism" and not is_symmetric(m):
            raise ValidationError(f"{where}.matrix: {variance} tensor must be symmetric")
        tensors[tname] = VARIANCES[variance](A, m)

    known = {"chart", "algebroid", "tensors", "description", "domain"}
    return InputDocument(
        name=name,
        chart=chart,
        algebroid=A,
        tensors=tensors,
        description=str(data.get("description", "")),
        domain=str(data.get("domain", "")),
        extra={k: v for k, v in data.items() if k not in known},
    )


def load(path: str | Path) -> InputDocument:
    name, text = resolve(path)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{name}: invalid JSON: {exc.msg} at line {exc.lineno} column {exc.colno}", exc.pos) from exc
    return parse_document(data, name)
