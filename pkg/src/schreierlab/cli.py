"""Command-line entry point.

Exit codes: 0 success or suite pass, 1 suite violation, 2 usage, input or
configuration error, 3 capacity exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from . import __version__
from .config import apply_overrides, capacity, set_capacity
from .errors import CapacityError, SchreierLabError
from .estimates import SuiteConfig, dominate
from .indices import (
    ExplicitOracle,
    SchreierOracle,
    cb_rank_finite,
    derivative_verdict,
    h_rho_member,
)
from .ordinal import parse_ordinal
from .report import dumps, frac, header
from .schreier import as_finset, certificate_to_json, family
from .spaces import RatVec, parse_space
from .tensor import TensorOp, injective_norm, square_block_projection
from .verify import ORDER, run_all, run_suite, suite_document

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_CAPACITY = 0, 1, 2, 3

log = logging.getLogger("schreierlab")


@dataclass
class Result:
    doc: dict
    text: str
    rows: list[dict] = field(default_factory=list)
    code: int = EXIT_OK


class UsageError(SchreierLabError, ValueError):
    pass


# --- argument helpers ----------------------------------------------------------


def int_set(text: str):
    try:
        items = [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None
    return as_finset(items)


def rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"expected a rational like 3/5, got {text!r}") from None


def load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc.msg} at line {exc.lineno}") from None


def load_vectors(path: str) -> list[RatVec]:
    data = load_json(path)
    if not isinstance(data, list) or not data:
        raise UsageError(f"{path} must hold a nonempty array of vectors")
    return [RatVec.from_json(v) for v in data]


def load_vector(args) -> RatVec:
    if args.vector:
        return RatVec.from_json(load_json(args.vector))
    items = []
    for part in filter(None, (s.strip() for s in args.coords.split(","))):
        k, sep, v = part.partition(":")
        if not sep:
            raise UsageError(f"coordinate {part!r} should look like index:value")
        try:
            items.append((int(k), rational(v)))
        except ValueError:
            raise UsageError(f"bad coordinate index in {part!r}") from None
    return RatVec(items)


def fmt(x: Fraction) -> str:
    return str(Fraction(x))


# --- commands ----------------------------------------------------------------


def cmd_schreier(args) -> Result:
    fam = family(parse_ordinal(args.alpha))
    alpha = str(fam.alpha)
    if args.action == "member":
        F = int_set(args.set)
        ok = fam.member(F)
        doc = {"alpha": alpha, "set": list(F), "member": ok, "extendable": ok and fam.can_extend(F)}
        return Result(doc, "true" if ok else "false", [doc])
    if args.action == "witness":
        F = int_set(args.set)
        cert = fam.witness(F)
        doc = {"alpha": alpha, "set": list(F), "member": cert is not None,
               "certificate": certificate_to_json(cert) if cert else None}
        text = json.dumps(doc["certificate"]) if cert else "false"
        return Result(doc, text, [{"alpha": alpha, "set": list(F), "member": cert is not None}])
    sets = fam.admissible(args.window, only_maximal=args.maximal)
    doc = {"alpha": alpha, "window": args.window, "maximal": args.maximal, "count": len(sets),
           "sets": [list(F) for F in sets]}
    text = "\n".join("{" + ",".join(map(str, F)) + "}" for F in sets)
    return Result(doc, text, [{"set": " ".join(map(str, F))} for F in sets])


def cmd_norm(args) -> Result:
    X = parse_space(args.space)
    x = load_vector(args)
    value = X.norm(x)
    phi = X.norming(x)
    doc = {"space": str(X), "vector": x.to_json(), "norm": frac(value), "norming_functional": phi.to_json()}
    return Result(doc, fmt(value), [{"space": str(X), "norm": fmt(value)}])


def cmd_estimate(args) -> Result:
    X = parse_space(args.space)
    V = parse_space(args.ref_space) if args.ref_space else X
    xs = load_vectors(args.vectors)
    refs = list(int_set(args.refs)) if args.refs else [x.support[0] for x in xs]
    if len(refs) != len(xs):
        raise UsageError("need one reference index per vector")
    report = dominate(xs, X, [RatVec.basis(k) for k in refs], V, args.mode, args.seed, args.samples)
    doc = {"space": str(X), "ref_space": str(V), "refs": refs, **report.to_json()}
    tail = "exact" if report.exact else "lower bound, sampled"
    text = f"C = {fmt(report.lower_bound)} ({tail}); witness a = ({', '.join(map(fmt, report.witness))})"
    return Result(doc, text, [{"C": fmt(report.lower_bound), "exact": report.exact}])


def suite_config(args) -> SuiteConfig:
    cfg = SuiteConfig(seed=args.seed)
    if args.samples is not None:
        cfg.samples = args.samples
    if getattr(args, "alpha", None):
        alphas = tuple(a.strip() for item in args.alpha for a in item.split(";") if a.strip())
        for a in alphas:
            parse_ordinal(a)
        cfg.alphas = alphas
    if getattr(args, "bound", None):
        cfg.bound = rational(args.bound)
    if getattr(args, "window", None):
        cfg.window = args.window
    if getattr(args, "max_count", None):
        cfg.max_count = args.max_count
    if getattr(args, "n_max", None):
        cfg.n_max = args.n_max
    if cfg.samples < 0:
        raise UsageError("samples must be nonnegative")
    return cfg


def _summary_rows(results: list[dict]) -> list[dict]:
    rows = []
    for r in results:
        mr = r.get("max_ratio")
        rows.append({
            "suite": r["suite"],
            "pass": r["pass"],
            "max_ratio": fmt(Fraction(*mr)) if mr else "",
            "error": r.get("capacity_error", ""),
        })
    return rows


def _summary_text(rows: list[dict]) -> str:
    lines = []
    for r in rows:
        status = "PASS" if r["pass"] is True else "FAIL"
        extra = f" max_ratio={r['max_ratio']}" if r["max_ratio"] else ""
        if r["error"]:
            extra += f" capacity: {r['error']}"
        lines.append(f"{r['suite']:<7} {status}{extra}")
    return "\n".join(lines)


def cmd_verify(args) -> Result:
    cfg = suite_config(args)
    if args.suite.lower() == "all":
        return _aggregate(cfg)
    report = run_suite(args.suite, cfg)
    doc = suite_document(report, cfg.seed)
    doc.pop("header")
    rows = _summary_rows([doc])
    return Result(doc, _summary_text(rows), rows, EXIT_OK if report.passed else EXIT_VIOLATION)


def _aggregate(cfg: SuiteConfig) -> Result:
    agg = run_all(cfg)
    agg.pop("header")
    rows = _summary_rows(agg["suites"])
    code = EXIT_OK
    if not agg["pass"]:
        caps = [r for r in agg["suites"] if "capacity_error" in r]
        code = EXIT_VIOLATION if len(caps) < sum(not r["pass"] for r in agg["suites"]) else EXIT_CAPACITY
    text = _summary_text(rows) + f"\nall     {'PASS' if agg['pass'] else 'FAIL'}"
    return Result(agg, text, rows, code)


def cmd_run_all(args) -> Result:
    return _aggregate(suite_config(args))


def cmd_index(args) -> Result:
    if args.action == "derive":
        F = int_set(args.set)
        if args.family:
            oracle = ExplicitOracle(as_finset(s) for s in load_json(args.family))
        else:
            oracle = SchreierOracle(parse_ordinal(args.alpha))
        verdict, G = derivative_verdict(F, oracle, args.stages)
        doc = {"family": str(oracle), "set": list(F), "stages": args.stages,
               "verdict": verdict.value, "extension": list(G) if G is not None else None}
        return Result(doc, verdict.value, [{k: doc[k] for k in ("family", "stages", "verdict")}])
    if args.action == "cb":
        data = load_json(args.family)
        if not isinstance(data, list):
            raise UsageError("family file must hold an array of sets")
        oracle = ExplicitOracle(as_finset(s) for s in data)
        rank = cb_rank_finite(oracle)
        doc = {"family": str(oracle), "rank": rank}
        return Result(doc, str(rank), [doc])
    X = parse_space(args.space)
    xs = load_vectors(args.vectors)
    cert = h_rho_member(xs, X, rational(args.rho))
    doc = {"space": str(X), **cert.to_json()}
    text = f"{'member' if cert.member else 'not member'}: min = {fmt(cert.min_value)} at ({', '.join(map(fmt, cert.minimizer))})"
    return Result(doc, text, [{"member": cert.member, "min_value": fmt(cert.min_value)}])


def load_tensor(path: str) -> TensorOp:
    return TensorOp.from_json(load_json(path))


def cmd_tensor(args) -> Result:
    u = load_tensor(args.file)
    if args.action == "norm":
        value = injective_norm(u, side=args.side)
        doc = {"tensor": u.to_json(), "injective_norm": frac(value)}
        return Result(doc, fmt(value), [{"injective_norm": fmt(value)}])
    p = square_block_projection(u, args.n)
    doc = {"n": args.n, "projection": p.to_json()}
    text = "\n".join(f"{i} {j} {fmt(v)}" for (i, j), v in p.entries.items())
    return Result(doc, text, [{"i": i, "j": j, "value": fmt(v)} for (i, j), v in p.entries.items()])


# --- parser ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "csv", "text"),
                        help="output format (default: text on stdout, json with --out)")
    common.add_argument("--capacity", default="", metavar="KEY=N,...",
                        help="capacity overrides, clamped to hard ceilings")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="schreierlab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("schreier", help="Schreier family queries")
    ssub = p.add_subparsers(dest="action", required=True)
    for name in ("member", "witness"):
        q = ssub.add_parser(name, parents=[common])
        q.add_argument("--alpha", required=True)
        q.add_argument("--set", required=True, help="comma-separated, e.g. 2,3,6")
        q.set_defaults(func=cmd_schreier)
    q = ssub.add_parser("enum", parents=[common])
    q.add_argument("--alpha", required=True)
    q.add_argument("--window", type=int, required=True)
    q.add_argument("--maximal", action="store_true")
    q.set_defaults(func=cmd_schreier)

    p = sub.add_parser("norm", parents=[common], help="norm and norming functional of a vector")
    p.add_argument("--space", required=True)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--vector", help="JSON file: [[index, num, den], ...]")
    src.add_argument("--coords", help="inline, e.g. 1:1/2,3:-1")
    p.set_defaults(func=cmd_norm)

    p = sub.add_parser("estimate", help="domination constants")
    esub = p.add_subparsers(dest="action", required=True)
    q = esub.add_parser("dominate", parents=[common])
    q.add_argument("--space", required=True)
    q.add_argument("--vectors", required=True, help="JSON file: array of vectors")
    q.add_argument("--refs", help="reference indices (default: min supports)")
    q.add_argument("--ref-space", help="space of the reference basis (default: --space)")
    q.add_argument("--mode", choices=("exact", "sample", "auto"), default="exact")
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--samples", type=int, default=200)
    q.set_defaults(func=cmd_estimate)

    def suite_flags(q, with_suite_options=True):
        q.add_argument("--seed", type=int, default=1)
        q.add_argument("--samples", type=int)
        if with_suite_options:
            q.add_argument("--alpha", action="append", help="ordinal; repeat or separate with ';'")
            q.add_argument("--bound", help="override the constant under test, e.g. 1")
            q.add_argument("--window", type=int)
            q.add_argument("--max-count", type=int)
            q.add_argument("--n-max", type=int)

    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("suite", help=f"one of {', '.join(ORDER)} or all")
    suite_flags(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("run-all", parents=[common], help="run every suite")
    suite_flags(p)
    p.set_defaults(func=cmd_run_all)

    p = sub.add_parser("index", help="derivatives and l1-lower trees")
    isub = p.add_subparsers(dest="action", required=True)
    q = isub.add_parser("derive", parents=[common])
    fam = q.add_mutually_exclusive_group(required=True)
    fam.add_argument("--alpha")
    fam.add_argument("--family", help="JSON file: array of sets of a finite hereditary family")
    q.add_argument("--set", default="")
    q.add_argument("--stages", type=int, required=True)
    q.set_defaults(func=cmd_index)
    q = isub.add_parser("hrho", parents=[common])
    q.add_argument("--space", required=True)
    q.add_argument("--vectors", required=True)
    q.add_argument("--rho", required=True)
    q.set_defaults(func=cmd_index)
    q = isub.add_parser("cb", parents=[common])
    q.add_argument("--family", required=True)
    q.set_defaults(func=cmd_index)

    p = sub.add_parser("tensor", help="injective tensor norms")
    tsub = p.add_subparsers(dest="action", required=True)
    q = tsub.add_parser("norm", parents=[common])
    q.add_argument("--file", required=True)
    q.add_argument("--side", choices=("rows", "cols", "auto"), default="rows")
    q.set_defaults(func=cmd_tensor)
    q = tsub.add_parser("project", parents=[common])
    q.add_argument("--file", required=True)
    q.add_argument("--n", type=int, required=True)
    q.set_defaults(func=cmd_tensor)
    return parser


def render(result: Result, fmt_name: str, seed, capacity_flag: str) -> str:
    if fmt_name == "json":
        return dumps({"header": header(seed, capacity_flag), **result.doc})
    if fmt_name == "csv":
        buf = io.StringIO()
        if result.rows:
            writer = csv.DictWriter(buf, fieldnames=list(result.rows[0]), lineterminator="\n")
            writer.writeheader()
            writer.writerows(result.rows)
        return buf.getvalue()
    return result.text + "\n" if result.text else ""


def dispatch(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    previous = capacity()
    try:
        set_capacity(apply_overrides(args.capacity, previous))
        result = args.func(args)
        fmt_name = args.format or ("json" if args.out else "text")
        text = render(result, fmt_name, getattr(args, "seed", None), args.capacity)
        if args.out:
            with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        return result.code
    except CapacityError as exc:
        print(f"capacity exceeded: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (SchreierLabError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    finally:
        set_capacity(previous)


def main() -> None:
    sys.exit(dispatch())
