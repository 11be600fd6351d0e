"""Command-line entry point: ``thetapoly <command> ...``.

Exit codes: 0 success, 1 validation or identity failure, 2 parse error,
3 resource limit.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path

from . import fixtures
from .bracket import DEFAULT_MAX_CROSSINGS, ResourceLimitError, jones, kauffman_bracket, writhe
from .diagram import Diagram, DiagramError, ParseError, diagram_to_text, link_components, parse_diagram, validate_diagram
from .laurent import to_canonical_string
from .theta import (
    ThetaError,
    associated_link,
    corollary1_check,
    normalized_jaeger,
    normalized_yamada,
    theorem1_report,
    twist_numbers,
    validate_theta,
    verify_prop1,
    verify_prop2,
    verify_prop3,
    verify_twist_reduction,
    verify_twists,
    Report,
)
from .yamada import DEFAULT_YAMADA_MAX_CROSSINGS, jaeger, jaeger_knot, normalized_jaeger_knot, yamada_state_sum

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_LIMIT = 0, 1, 2, 3
KINDS = ("yamada", "yamada-normalized", "bracket", "jones", "jaeger", "jaeger-normalized")
CHECKS = ("prop1", "prop2", "prop3", "thm1", "cor1", "twists")


class Failure(Exception):
    """Validation or identity failure (exit 1)."""


class Context:
    def __init__(self, args):
        self.bracket = {
            "method": "fast" if args.fast_bracket == "on" else "naive",
            "max_crossings": args.max_crossings,
            "threads": args.threads,
        }
        self.yamada = {"max_crossings": args.max_yamada_crossings}
        self.timings: dict[str, float] = {}

    def timed(self, stage, fn, *a, **kw):
        t0 = time.perf_counter()
        try:
            return fn(*a, **kw)
        finally:
            self.timings[stage] = self.timings.get(stage, 0.0) + (time.perf_counter() - t0) * 1000


def _read(path: str) -> tuple[Diagram, str]:
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError:
        raise ParseError(f"{path} is not UTF-8") from None
    return parse_diagram(text), hashlib.sha256(raw).hexdigest()


def _theta(d: Diagram):
    if d.kind != "theta":
        raise Failure("this command needs a theta-v1 file")
    return validate_theta(d)


def _require_valid(d: Diagram) -> None:
    report = validate_diagram(d)
    if not report.ok:
        raise Failure(str(report))


def _is_knot(d: Diagram) -> bool:
    return d.kind == "link" and len(link_components(d)) == 1


def cmd_validate(args, ctx) -> int:
    d, _ = _read(args.file)
    report = validate_diagram(d)
    if not report.ok:
        print(report)
        return EXIT_FAIL
    if d.kind == "theta":
        try:
            t = validate_theta(d)
            n = twist_numbers(t)
        except ThetaError as exc:
            print(f"invalid:\n  - {exc}")
            return EXIT_FAIL
        print(f"valid theta diagram: {d.n_crossings} crossings, n = {n.as_tuple()}")
    else:
        print(f"valid link diagram: {d.n_crossings} crossings, {len(link_components(d))} components")
    return EXIT_OK


def compute_invariant(d: Diagram, kind: str, ctx: Context):
    _require_valid(d)
    if kind == "bracket":
        return ctx.timed("bracket", kauffman_bracket, d, **ctx.bracket)
    if kind == "jones":
        return ctx.timed("bracket", jones, d, **ctx.bracket)
    if kind == "yamada":
        return ctx.timed("yamada", yamada_state_sum, d, **ctx.yamada)
    if kind == "jaeger":
        return ctx.timed("yamada", jaeger, d, **ctx.yamada)
    if kind == "yamada-normalized":
        if d.kind == "theta":
            return ctx.timed("yamada", normalized_yamada, _theta(d), **ctx.yamada)
        if _is_knot(d):
            return ctx.timed("yamada", yamada_state_sum, d, **ctx.yamada).shift(-2 * writhe(d))
        raise Failure("normalized invariants need a theta curve or a knot")
    if kind == "jaeger-normalized":
        if d.kind == "theta":
            return ctx.timed("yamada", normalized_jaeger, _theta(d), **ctx.yamada)
        if _is_knot(d):
            return ctx.timed("bracket", normalized_jaeger_knot, d, **ctx.bracket)
        raise Failure("normalized invariants need a theta curve or a knot")
    raise ValueError(kind)


def cmd_invariant(args, ctx) -> int:
    d, _ = _read(args.file)
    print(to_canonical_string(compute_invariant(d, args.kind, ctx)))
    return EXIT_OK


def cmd_assoc_link(args, ctx) -> int:
    d, _ = _read(args.file)
    t = _theta(d)
    n = twist_numbers(t)
    link = associated_link(t, n)
    Path(args.out).write_text(
        diagram_to_text(link, comment=f"associated link L{n.as_tuple()} of {Path(args.file).name}"), encoding="utf-8"
    )
    print(f"n = ({n.n1}, {n.n2}, {n.n3})")
    print(f"writhe = {writhe(link)}")
    return EXIT_OK


def run_check(d: Diagram, which: str, ctx: Context) -> Report:
    bk, yk = ctx.bracket, ctx.yamada
    if which == "prop1" and _is_knot(d):
        lhs = ctx.timed("yamada", jaeger, d, **yk)
        rhs = ctx.timed("bracket", jaeger_knot, d, **bk)
        return Report({"yamada_route": lhs, "bracket_route": rhs}, {"equal": lhs == rhs})
    if which == "twists" and d.kind == "link":
        region = (d.arcs[0], d.arcs[0])
        checks = {f"n{n}": ctx.timed("bracket", verify_twist_reduction, d, region, n, **bk) for n in range(-3, 4)}
        return Report({}, checks)
    t = _theta(d)
    if which == "prop1":
        return ctx.timed("prop1", verify_prop1, t, yk, **bk)
    if which == "prop2":
        return ctx.timed("prop2", verify_prop2, t, **bk)
    if which == "prop3":
        return ctx.timed("prop3", verify_prop3, t, yk, **bk)
    if which == "thm1":
        return ctx.timed("thm1", theorem1_report, t, yk, **bk)
    if which == "cor1":
        return ctx.timed("cor1", corollary1_check, t, yk, **bk)
    if which == "twists":
        return ctx.timed("twists", verify_twists, t, **bk)
    raise ValueError(which)


def cmd_verify(args, ctx) -> int:
    d, digest = _read(args.file)
    _require_valid(d)
    report = run_check(d, args.which, ctx)
    if args.json:
        payload = {
            "input_sha256": digest,
            "command": f"verify --which {args.which}",
            "values": report.value_strings(),
            "checks": report.checks,
            "timings_ms": {k: round(v, 3) for k, v in ctx.timings.items()},
        }
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for k, v in report.checks.items():
            print(f"{k}: {'true' if v else 'false'}")
        for k, v in report.value_strings().items():
            print(f"{k}: {v}")
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_fixtures(args, ctx) -> int:
    if args.action == "list":
        for name in fixtures.fixture_names():
            print(name)
        return EXIT_OK
    if not args.name:
        raise Failure("fixtures emit needs a fixture name")
    try:
        text = fixtures.fixture_text(args.name)
    except KeyError as exc:
        raise Failure(str(exc.args[0])) from None
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-crossings", type=int, default=DEFAULT_MAX_CROSSINGS, help="naive bracket crossing limit")
    common.add_argument(
        "--max-yamada-crossings", type=int, default=DEFAULT_YAMADA_MAX_CROSSINGS, help="Yamada state-sum crossing limit"
    )
    common.add_argument("--threads", type=int, default=1, help="worker processes for the naive bracket")
    common.add_argument("--fast-bracket", choices=("on", "off"), default="on", help="contraction bracket (on) or naive state sum (off)")
    p = argparse.ArgumentParser(prog="thetapoly", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    s = sub.add_parser("validate", parents=[common], help="check a diagram file")
    s.add_argument("file")
    s.set_defaults(func=cmd_validate)
    s = sub.add_parser("invariant", parents=[common], help="print an invariant")
    s.add_argument("file")
    s.add_argument("--kind", choices=KINDS, required=True)
    s.set_defaults(func=cmd_invariant)
    s = sub.add_parser("assoc-link", parents=[common], help="write the associated link of a theta curve")
    s.add_argument("file")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_assoc_link)
    s = sub.add_parser("verify", parents=[common], help="check an identity")
    s.add_argument("file")
    s.add_argument("--which", choices=CHECKS, required=True)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_verify)
    s = sub.add_parser("fixtures", parents=[common], help="list or print built-in diagrams")
    s.add_argument("action", choices=("list", "emit"))
    s.add_argument("name", nargs="?")
    s.add_argument("--out")
    s.set_defaults(func=cmd_fixtures)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    ctx = Context(args)
    try:
        return args.func(args, ctx)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except (Failure, DiagramError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
