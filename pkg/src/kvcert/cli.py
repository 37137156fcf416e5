"""Command-line front end: ``kvcert <command> <document> [tensor ...]``.

Exit codes: 0 when every requested check holds, 1 when at least one fails
(the report is still complete), 2 for input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from typing import Any, Callable

from . import algebroid as alg
from . import checks
from .certificate import Certificate
from .document import InputDocument, load
from .errors import (
    Degenerate,
    ParseError,
    PreconditionFailed,
    SymmetryViolation,
    UnknownVariable,
    ValidationError,
)
from .expr import print_expr
from .tensors import BundleMap, SymTensorCo, SymTensorContra, dual_algebroid, invert

CONTRA, CO, ENDO = "contravariant", "covariant", "endomorphism"


@dataclass
class Report:
    command: str
    document: InputDocument
    arguments: list[str]
    checks: list[tuple[str, Certificate]] = field(default_factory=list)
    derived: dict[str, Any] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)
    failed: bool = False
    seconds: float = 0.0

    def add(self, title: str, cert: Certificate):
        self.checks.append((title, cert))
        for k, v in cert.derived.items():
            self.derived.setdefault(f"{title}.{k}" if k in self.derived else k, v)

    @property
    def holds(self) -> bool:
        return not self.failed and all(c.holds for _, c in self.checks)

    @property
    def exit_code(self) -> int:
        return 0 if self.holds else 1


def _render(value) -> Any:
    """Derived objects as nested lists of printed expressions."""
    if hasattr(value, "num") and hasattr(value, "den"):
        return print_expr(value)
    if isinstance(value, SymTensorContra):
        return _render(value.h)
    if isinstance(value, SymTensorCo):
        return _render(value.b)
    if isinstance(value, BundleMap):
        return _render(value.m)
    if isinstance(value, (tuple, list)):
        return [_render(v) for v in value]
    return value


# -- command implementations --------------------------------------------------------


def _precondition(report: Report, title: str, exc: PreconditionFailed):
    report.failed = True
    report.notes.append(f"{title}: precondition failed: {exc}")
    if exc.certificate is not None:
        report.add(f"{title}.precondition", exc.certificate)


def cmd_axioms(doc, report, args):
    report.add("axioms", alg.check_axioms(doc.algebroid))


def cmd_kv(doc, report, args):
    report.add("kv", checks.check_koszul_vinberg(doc.tensor(args[0], CONTRA)))


def cmd_compatible(doc, report, args):
    report.add("compatible", checks.check_compatible(doc.tensor(args[0], CONTRA), doc.tensor(args[1], CONTRA)))


def cmd_nijenhuis(doc, report, args):
    report.add("nijenhuis", checks.check_nijenhuis(doc.tensor(args[0], ENDO)))


def cmd_kvn(doc, report, args):
    report.add("kvn", checks.check_kvn(doc.tensor(args[0], CONTRA), doc.tensor(args[1], ENDO)))


def cmd_kvb(doc, report, args):
    report.add("kvb", checks.check_kvb(doc.tensor(args[0], CONTRA), doc.tensor(args[1], CO)))


def cmd_hn(doc, report, args):
    report.add("hn", checks.check_hn(doc.tensor(args[0], CO), doc.tensor(args[1], ENDO)))


def cmd_hn2(doc, report, args):
    B, N = doc.tensor(args[0], CO), doc.tensor(args[1], ENDO)
    try:
        report.add("hn2", checks.check_hn_via_squares(B, N))
    except PreconditionFailed as exc:
        _precondition(report, "hn2", exc)


def cmd_complementary(doc, report, args):
    H, B = doc.tensor(args[0], CONTRA), doc.tensor(args[1], CO)
    try:
        report.add("complementary", checks.check_complementary(H, B))
    except PreconditionFailed as exc:
        _precondition(report, "complementary", exc)


def cmd_hessian(doc, report, args):
    report.add("pseudo-hessian", checks.check_pseudo_hessian(doc.tensor(args[0], CO)))


def cmd_hierarchy(doc, report, args, depth=3):
    base, N = doc.tensor(args[0], CONTRA, CO), doc.tensor(args[1], ENDO)
    try:
        hier = checks.hierarchy(base, N, depth)
    except PreconditionFailed as exc:
        _precondition(report, "hierarchy", exc)
        return
    except SymmetryViolation as exc:
        report.failed = True
        report.notes.append(f"hierarchy: {exc}")
        return
    for k, cert in enumerate(hier.member_checks):
        report.add(f"member[{k}]", cert)
        report.derived[f"power[{k}]"] = hier.members[k]
    for (k, l), cert in hier.pairs():
        report.add(f"pair[{k},{l}]", cert)


def cmd_dual(doc, report, args):
    H = doc.tensor(args[0], CONTRA)
    report.add("kv", checks.check_koszul_vinberg(H))
    D = dual_algebroid(H)
    report.add("dual-axioms", alg.check_axioms(D))
    report.derived["gamma"] = D.gamma
    report.derived["anchor"] = D.anchor


def cmd_invert(doc, report, args):
    T = doc.tensor(args[0], CONTRA, CO)
    try:
        report.derived["inverse"] = invert(T)
    except Degenerate as exc:
        report.failed = True
        report.notes.append(f"invert: {args[0]} is degenerate ({exc})")


def cmd_derive_n(doc, report, args):
    H1, H = doc.tensor(args[0], CONTRA), doc.tensor(args[1], CONTRA)
    try:
        N = checks.derive_nijenhuis(H1, H)
    except Degenerate as exc:
        report.failed = True
        report.notes.append(f"derive-n: {args[1]} is degenerate ({exc})")
        return
    report.derived["N"] = N
    report.add("nijenhuis", checks.check_nijenhuis(N))


COMMANDS: dict[str, tuple[int, Callable]] = {
    "axioms": (0, cmd_axioms),
    "kv": (1, cmd_kv),
    "compatible": (2, cmd_compatible),
    "nijenhuis": (1, cmd_nijenhuis),
    "kvn": (2, cmd_kvn),
    "kvb": (2, cmd_kvb),
    "hn": (2, cmd_hn),
    "hn2": (2, cmd_hn2),
    "complementary": (2, cmd_complementary),
    "hessian": (1, cmd_hessian),
    "hierarchy": (2, cmd_hierarchy),
    "dual": (1, cmd_dual),
    "invert": (1, cmd_invert),
    "derive-n": (2, cmd_derive_n),
}


def run(command: str, document: InputDocument, arguments: list[str], depth: int = 3) -> Report:
    arity, fn = COMMANDS[command]
    if len(arguments) != arity:
        raise ValidationError(f"{command} takes {arity} tensor name(s), got {len(arguments)}")
    report = Report(command, document, list(arguments))
    start = time.perf_counter()
    if command == "hierarchy":
        fn(document, report, arguments, depth)
    else:
        fn(document, report, arguments)
    report.seconds = time.perf_counter() - start
    return report


# -- output ------------------------------------------------------------------------------


def machine_form(report: Report) -> dict:
    doc = report.document
    return {
        "command": report.command,
        "document": doc.name,
        "arguments": report.arguments,
        "description": doc.description,
        "domain": doc.domain,
        "verdict": "holds" if report.holds else "fails",
        "exit_code": report.exit_code,
        "checks": [
            {
                "name": title,
                "verdict": cert.verdict,
                "residuals": [
                    {"check": r.label, "index": list(r.index), "expression": print_expr(r.value)}
                    for r in cert.residuals
                ],
                "notes": list(cert.notes),
            }
            for title, cert in report.checks
        ],
        "derived": {k: _render(v) for k, v in report.derived.items()},
        "notes": report.notes,
    }


def _format_matrix(m, indent="    ") -> list[str]:
    return [indent + "[" + ", ".join(row) + "]" for row in m]


def human_form(report: Report, verbose: bool = False) -> str:
    doc = report.document
    lines = [f"{report.command} {doc.name} {' '.join(report.arguments)}".rstrip()]
    if verbose and doc.description:
        lines.append(f"  {doc.description}")
    if doc.domain:
        lines.append(f"  domain: {doc.domain} (not enforced)")
    for title, cert in report.checks:
        lines.append(f"  {title}: {cert.verdict}")
        for r in cert.residuals:
            lines.append(f"    {r.label}{r.index} = {print_expr(r.value)}")
        if verbose:
            lines.extend(f"    note: {n}" for n in cert.notes)
    for name, value in report.derived.items():
        rendered = _render(value)
        lines.append(f"  {name}:")
        if name == "gamma":
            for i, plane in enumerate(rendered):
                lines.append(f"    e{i} . e_j:")
                lines.extend(_format_matrix(plane, "      "))
        else:
            lines.extend(_format_matrix(rendered))
    lines.extend(f"  {n}" for n in report.notes)
    lines.append(f"verdict: {'holds' if report.holds else 'fails'} ({report.seconds:.3f} s)")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="kvcert",
        description="Exact certificates for structures on left-symmetric algebroids.",
    )
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("document", help="path to a JSON document, or the name of a shipped fixture")
    p.add_argument("tensors", nargs="*", help="tensor names from the document")
    p.add_argument("--depth", type=int, default=3, help="hierarchy depth (default 3)")
    p.add_argument("--machine", action="store_true", help="emit a JSON report")
    p.add_argument("--verbose", action="store_true", help="include descriptions and notes")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.depth < 0:
        print("kvcert: error: --depth must be nonnegative", file=sys.stderr)
        return 2
    try:
        doc = load(args.document)
        report = run(args.command, doc, args.tensors, args.depth)
    except (ValidationError, ParseError, UnknownVariable) as exc:
        print(f"kvcert: error: {exc}", file=sys.stderr)
        return 2
    if args.machine:
        sys.stdout.write(json.dumps(machine_form(report), indent=2, sort_keys=True) + "\n")
    else:
        print(human_form(report, args.verbose))
    return report.exit_code

