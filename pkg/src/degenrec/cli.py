"""Command-line front end.

Exit codes: 0 success, 1 malformed input, 2 classification rejection,
3 fit failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys
from typing import Optional, Sequence

from .binet import solve_coefficients
from .convergence import converged_limit, limit_value, u2_solutions
from .limits import (
    VanishingSequenceError,
    analytic_limits,
    empirical_gamma_squared,
    empirical_parity_limits,
    empirical_two_step_limit,
)
from .numerics import (
    Backend,
    ScalarParseError,
    Tolerance,
    default_tolerance,
    parse_scalar,
    render,
    render_optional,
)
from .recurrence import (
    Classification,
    DegenerateRoots,
    FitMismatchError,
    InvalidRootsError,
    RecurrenceSpec,
    SingularFitError,
    Tag,
    classify,
    fit_coefficients,
    iterate_terms,
)

EXIT_OK, EXIT_INPUT, EXIT_CLASSIFICATION, EXIT_FIT = 0, 1, 2, 3


class CliError(Exception):
    def __init__(self, message: str, code: int, payload: Optional[dict] = None):
        super().__init__(message)
        self.code = code
        self.payload = payload


def parse_all(raw: dict, backend: Optional[str]) -> tuple[dict, Backend]:
    """Parse named scalar strings with one backend.

    Without an explicit backend, exact is used when every value reads as a
    rational and float otherwise.
    """
    raw = {k: v for k, v in raw.items() if v is not None}
    candidates = [Backend(backend)] if backend else [Backend.EXACT, Backend.FLOAT]
    last = None
    for b in candidates:
        try:
            return {k: parse_scalar(v, b) for k, v in raw.items()}, b
        except ScalarParseError as exc:
            last = exc
    raise CliError(str(last), EXIT_INPUT)


def _tolerance(args, backend: Backend) -> Tolerance:
    base = default_tolerance(Backend.FLOAT)
    if backend is Backend.EXACT and args.tol_rel is None and args.tol_abs is None:
        return default_tolerance(backend)
    return Tolerance(
        base.relative if args.tol_rel is None else args.tol_rel,
        base.absolute if args.tol_abs is None else args.tol_abs,
    )


def _float_tolerance(args) -> Tolerance:
    return _tolerance(args, Backend.FLOAT)


def roots_json(roots: DegenerateRoots) -> dict:
    return {
        "lambda1": render(roots.lambda1),
        "lambda2": render(roots.lambda2),
        "lambda3": render(roots.lambda3),
    }


def classification_json(c: Classification) -> dict:
    return {
        "tag": c.tag.value,
        "reason": c.reason,
        "roots": roots_json(c.roots) if c.roots else None,
    }


def resolve_roots(values: dict, args) -> tuple[DegenerateRoots, Classification]:
    """Roots from --lambda2/--lambda3, or by classifying --a1/--a2/--a3."""
    have_roots = "lambda2" in values or "lambda3" in values
    have_coeffs = any(k in values for k in ("a1", "a2", "a3"))
    if have_roots == have_coeffs:
        raise CliError("give either --lambda2/--lambda3 or --a1/--a2/--a3", EXIT_INPUT)
    if have_roots:
        if not ("lambda2" in values and "lambda3" in values):
            raise CliError("both --lambda2 and --lambda3 are required", EXIT_INPUT)
        try:
            roots = DegenerateRoots(values["lambda2"], values["lambda3"])
        except InvalidRootsError as exc:
            cls = Classification(Tag.NOT_DEGENERATED, reason=str(exc))
            raise CliError(str(exc), EXIT_CLASSIFICATION, {"classification": classification_json(cls)})
        return roots, Classification(Tag.DEGENERATED, roots, "constructed from roots")
    if not all(k in values for k in ("a1", "a2", "a3")):
        raise CliError("--a1, --a2 and --a3 are all required", EXIT_INPUT)
    cls = classify(values["a1"], values["a2"], values["a3"], None)
    if not cls.accepted:
        raise CliError(cls.reason, EXIT_CLASSIFICATION, {"classification": classification_json(cls)})
    return cls.roots, cls


def _estimate_json(fn, spec, n_max, tol) -> dict:
    try:
        est = fn(spec, n_max, tol)
    except VanishingSequenceError as exc:
        return {"error": str(exc)}
    return {
        "value": render(est.value),
        "converged": est.converged,
        "skipped_indices": est.skipped_indices,
    }


def empirical_json(spec: RecurrenceSpec, n_max: int, tol: Tolerance) -> dict:
    out: dict = {"n_max": n_max}
    try:
        p = empirical_parity_limits(spec, n_max, tol)
        out["parity"] = {
            "even": render_optional(p.even),
            "odd": render_optional(p.odd),
            "converged": p.converged,
            "skipped_indices": p.skipped_indices,
        }
    except VanishingSequenceError as exc:
        out["parity"] = {"error": str(exc)}
    out["two_step"] = _estimate_json(empirical_two_step_limit, spec, n_max, tol)
    out["gamma_squared"] = _estimate_json(empirical_gamma_squared, spec, n_max, tol)
    return out


def build_report(
    roots: DegenerateRoots,
    cls: Classification,
    u: Sequence,
    backend: Backend,
    tol: Tolerance,
    n_max: int,
    empirical: bool,
    float_tol: Tolerance,
) -> dict:
    u0, u1, u2 = u
    a1, a2, a3 = roots.coefficients()
    spec = RecurrenceSpec(a1, a2, a3, u0, u1, u2)
    c = solve_coefficients(roots, u0, u1, u2)
    report = analytic_limits(roots, u0, u1, u2, tol)
    sol = u2_solutions(roots, u0, u1, tol)
    kind = converged_limit(roots, u0, u1, u2, tol)
    doc = {
        "backend": backend.value,
        "classification": classification_json(cls),
        "coefficients": {"a1": render(a1), "a2": render(a2), "a3": render(a3)},
        "initial_conditions": {"u0": render(u0), "u1": render(u1), "u2": render(u2)},
        "binet": c.to_json(),
        "limits": report.to_json(),
        "convergence": {
            **sol.to_json(),
            "limit": kind.value,
            "limit_value": render_optional(limit_value(roots, kind)),
        },
    }
    if backend is Backend.FLOAT or empirical:
        doc["empirical"] = empirical_json(spec, n_max, float_tol)
    return doc


# -- output ----------------------------------------------------------------


def _flatten(doc, prefix="") -> list[tuple[str, str]]:
    rows = []
    if isinstance(doc, dict):
        for k, v in doc.items():
            rows.extend(_flatten(v, f"{prefix}.{k}" if prefix else k))
    elif isinstance(doc, list) and not all(isinstance(x, (int, str)) for x in doc):
        for i, v in enumerate(doc):
            rows.extend(_flatten(v, f"{prefix}[{i}]"))
    else:
        if isinstance(doc, list):
            text = " ".join(map(str, doc))
        elif doc is None:
            text = ""
        elif isinstance(doc, bool):
            text = str(doc).lower()
        else:
            text = str(doc)
        rows.append((prefix, text))
    return rows


def _csv(rows, header) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _table(rows, header) -> str:
    rows = [tuple(header)] + [tuple(map(str, r)) for r in rows]
    width = max(len(r[0]) for r in rows)
    return "".join(f"{r[0]:<{width}}  {r[1]}\n" for r in rows)


def emit_document(doc: dict, fmt: str, out) -> None:
    if fmt == "json":
        out.write(json.dumps(doc, indent=2, ensure_ascii=False) + "\n")
    elif fmt == "csv":
        out.write(_csv(_flatten(doc), ("key", "value")))
    else:
        out.write(_table(_flatten(doc), ("key", "value")))


def emit_terms(terms: Sequence, fmt: str, out) -> None:
    rendered = [render(t) for t in terms]
    if fmt == "json":
        out.write(json.dumps(rendered) + "\n")
    elif fmt == "csv":
        out.write(_csv(enumerate(rendered), ("n", "value")))
    else:
        out.write(_table(enumerate(rendered), ("n", "value")))


def read_terms(text: str) -> list[str]:
    """Terms as strings from a JSON array, ``n,value`` CSV, or a plain list."""
    text = text.strip()
    if text.startswith("["):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise CliError(f"malformed JSON terms: {exc}", EXIT_INPUT)
        return [str(x["value"]) if isinstance(x, dict) else str(x) for x in data]
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if lines and re.fullmatch(r"n\s*,\s*value", lines[0]):
        return [ln.split(",", 1)[1].strip() for ln in lines[1:]]
    return [tok for tok in re.split(r"[,\s]+", text) if tok]


# -- commands --------------------------------------------------------------


def _scalar_args(args, names) -> dict:
    return {k: getattr(args, k) for k in names}


SPEC_NAMES = ("lambda2", "lambda3", "a1", "a2", "a3")


def cmd_analyze(args, out) -> int:
    values, backend = parse_all(_scalar_args(args, SPEC_NAMES + ("u0", "u1", "u2")), args.backend)
    for k in ("u0", "u1", "u2"):
        if k not in values:
            raise CliError(f"--{k} is required", EXIT_INPUT)
    if args.n < 8:
        raise CliError("--n must be at least 8 for limit estimation", EXIT_INPUT)
    roots, cls = resolve_roots(values, args)
    doc = build_report(
        roots,
        cls,
        (values["u0"], values["u1"], values["u2"]),
        backend,
        _tolerance(args, backend),
        args.n,
        args.empirical,
        _float_tolerance(args),
    )
    emit_document(doc, args.format, out)
    return EXIT_OK


def cmd_terms(args, out) -> int:
    values, backend = parse_all(_scalar_args(args, SPEC_NAMES + ("u0", "u1", "u2")), args.backend)
    for k in ("u0", "u1", "u2"):
        if k not in values:
            raise CliError(f"--{k} is required", EXIT_INPUT)
    if args.n < 0:
        raise CliError("--n must be non-negative", EXIT_INPUT)
    roots, _ = resolve_roots(values, args)
    spec = RecurrenceSpec(*roots.coefficients(), values["u0"], values["u1"], values["u2"])
    terms = iterate_terms(spec, args.n)
    if terms.overflow_at is not None:
        print(f"warning: float overflow from index {terms.overflow_at}", file=sys.stderr)
    emit_terms(terms, args.format, out)
    return EXIT_OK


def cmd_fix(args, out) -> int:
    values, backend = parse_all(_scalar_args(args, ("lambda2", "lambda3", "u0", "u1")), args.backend)
    for k in ("lambda2", "lambda3", "u0", "u1"):
        if k not in values:
            raise CliError(f"--{k} is required", EXIT_INPUT)
    roots, _ = resolve_roots(values, args)
    tol = _tolerance(args, backend)
    u0, u1 = values["u0"], values["u1"]
    sol = u2_solutions(roots, u0, u1, tol)
    branches = []
    candidates = [sol.u2_first] if sol.coincident else [sol.u2_first, sol.u2_second]
    for u2 in candidates:
        kind = converged_limit(roots, u0, u1, u2, tol)
        branches.append({"u2": render(u2), "limit": kind.value, "limit_value": render_optional(limit_value(roots, kind))})
    doc = {
        "backend": backend.value,
        "roots": roots_json(roots),
        "initial_conditions": {"u0": render(u0), "u1": render(u1)},
        **sol.to_json(),
        "branches": branches,
    }
    emit_document(doc, args.format, out)
    return EXIT_OK


def cmd_fit(args, out) -> int:
    if args.file and args.file != "-":
        try:
            with open(args.file, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise CliError(str(exc), EXIT_INPUT)
    else:
        text = sys.stdin.read()
    tokens = read_terms(text)
    if len(tokens) < 6:
        raise CliError(f"need at least 6 terms, got {len(tokens)}", EXIT_INPUT)
    parsed, backend = parse_all({str(i): t for i, t in enumerate(tokens)}, args.backend)
    terms = [parsed[str(i)] for i in range(len(tokens))]
    tol = _tolerance(args, backend)
    try:
        a1, a2, a3 = fit_coefficients(terms, tol)
    except SingularFitError as exc:
        raise CliError(str(exc), EXIT_FIT, {"fit": {"error": str(exc)}})
    except FitMismatchError as exc:
        raise CliError(str(exc), EXIT_FIT, {"fit": {"error": str(exc), "first_failing_index": exc.index}})

    fitted = {"a1": render(a1), "a2": render(a2), "a3": render(a3)}
    cls = classify(a1, a2, a3, tol)
    if not cls.accepted:
        raise CliError(
            cls.reason, EXIT_CLASSIFICATION, {"fit": fitted, "classification": classification_json(cls)}
        )
    doc = {"fit": fitted}
    doc.update(
        build_report(
            cls.roots, cls, terms[:3], backend, tol, args.n, args.empirical, _float_tolerance(args)
        )
    )
    emit_document(doc, args.format, out)
    return EXIT_OK


def _nonneg_float(text: str) -> float:
    value = float(text)
    if not value >= 0 or math.isinf(value):
        raise argparse.ArgumentTypeError("must be a finite non-negative number")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--backend", choices=[b.value for b in Backend])
    common.add_argument("--format", choices=["json", "csv", "table"], default="json")
    common.add_argument("--tol-rel", type=_nonneg_float)
    common.add_argument("--tol-abs", type=_nonneg_float)

    spec = argparse.ArgumentParser(add_help=False)
    for name in ("lambda2", "lambda3", "a1", "a2", "a3", "u0", "u1", "u2"):
        spec.add_argument(f"--{name}")

    parser = argparse.ArgumentParser(
        prog="degenrec", description="Analyze degenerated third-order linear recurrences."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common, spec], help="full analysis report")
    p.add_argument("--n", type=int, default=200, help="last index for empirical estimates")
    p.add_argument("--empirical", action="store_true", help="include empirical estimates on the exact backend")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("terms", parents=[common, spec], help="list U[0..n]")
    p.add_argument("--n", type=int, default=10)
    p.set_defaults(func=cmd_terms)

    p = sub.add_parser("fix", parents=[common], help="u2 values that make the ratio converge")
    for name in ("lambda2", "lambda3", "u0", "u1"):
        p.add_argument(f"--{name}")
    p.set_defaults(func=cmd_fix)

    p = sub.add_parser("fit", parents=[common], help="recover coefficients from terms, then analyze")
    p.add_argument("file", nargs="?", help="terms file; stdin when omitted or '-'")
    p.add_argument("--n", type=int, default=200)
    p.add_argument("--empirical", action="store_true")
    p.set_defaults(func=cmd_fit)
    return parser


SCALAR_FLAGS = {f"--{k}" for k in SPEC_NAMES + ("u0", "u1", "u2")}


def _attach_negative_values(argv: Sequence[str]) -> list[str]:
    """Rewrite ``--u0 -1/2`` as ``--u0=-1/2``; argparse would read ``-1/2`` as a flag."""
    out: list[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in SCALAR_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-") and not argv[i + 1].startswith("--"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    argv = _attach_negative_values(sys.argv[1:] if argv is None else argv)
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args, out)
    except CliError as exc:
        if exc.payload is not None:
            emit_document(exc.payload, args.format, out)
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
