"""Command-line frontend: ``repdigit-lrs <subcommand> ...``."""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import __version__
from .baseexp import BaseSpec, DigitString, evaluate, expand, match_pattern, value_to_json
from .bounds import bound
from .errors import HypothesisViolation, InvalidInput, NoExpansion, RepeatedRoots, ToolkitError
from .exactnum import polys
from .exactnum.algebraic import height_of_minpoly
from .exactnum.quadfield import QQ
from .recurrence import RecurrenceSpec, Verdict, characteristic_data, check_hypotheses, load_presets, preset
from .search import certify, enumerate_solutions

EXIT_OK = 0
EXIT_HYPOTHESIS = 2
EXIT_INVALID = 3
EXIT_USAGE = 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise UsageError(message)

    def exit(self, status=0, message=None):
        if message:
            sys.stderr.write(message)
        raise SystemExit(status)


def _json_arg(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def _add_spec(p):
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--preset", choices=sorted(load_presets()), help="built-in recurrence")
    g.add_argument("--spec", metavar="FILE", help='JSON file {"coeffs": [...], "initials": [...], "field": ...}')


def _add_base(p, required=False):
    p.add_argument("--base", default=None if required else "10", required=required,
                   help="integer base, or a JSON file {\"field\": ..., \"beta\": ...} (default 10)")


def _add_common(p):
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--precision", type=int, default=256, metavar="BITS", help="working precision (default 256)")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="repdigit-lrs",
                 description="Search recurrence terms that are palindromic concatenations of two repdigits.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("check", help="certify the dominant-root hypotheses for a recurrence")
    _add_spec(p)
    p.add_argument("--base", default=None, help="take the field K from this base spec")
    _add_common(p)

    p = sub.add_parser("search", help="enumerate solutions over 0 <= n <= N")
    _add_spec(p)
    _add_base(p)
    p.add_argument("--n-min", type=int, default=0)
    p.add_argument("--n-max", type=int, default=500)
    p.add_argument("--distinct", action="store_true", help="require d1 != d2")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--method", choices=("auto", "integer", "generic"), default="auto")
    _add_common(p)

    p = sub.add_parser("certify", help="hypotheses, explicit N_max, then search up to min(N_max, cap)")
    _add_spec(p)
    _add_base(p)
    p.add_argument("--cap", "--n-max", dest="cap", type=int, default=10 ** 4)
    p.add_argument("--distinct", action="store_true")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--trace", action="store_true", help="include the constant derivation trace")
    _add_common(p)

    p = sub.add_parser("bound", help="explicit constants and the index bound N_max")
    _add_spec(p)
    _add_base(p)
    p.add_argument("--trace", action="store_true")
    _add_common(p)

    p = sub.add_parser("height", help="Weil height of the roots of an irreducible integer polynomial")
    p.add_argument("--minpoly", required=True, help="coefficients, constant term first, e.g. \"[-2,0,1]\"")
    p.add_argument("--tol", type=float, default=1e-30)
    _add_common(p)

    p = sub.add_parser("expand", help="greedy base-beta expansion of an algebraic integer")
    p.add_argument("--value", required=True, help="integer, or coordinates [a, b] meaning a + b sqrt(d)")
    _add_base(p)
    p.add_argument("--digit-cap", type=int, default=None)
    _add_common(p)

    p = sub.add_parser("eval", help="value of a digit string in base beta")
    p.add_argument("--digits", required=True, help='e.g. "1,5,1" or "151"')
    _add_base(p)
    _add_common(p)

    p = sub.add_parser("match", help="decompose a digit string as d1^l d2^m d1^l")
    p.add_argument("--digits", required=True)
    p.add_argument("--distinct", action="store_true")
    _add_common(p)
    return ap


# -- loading ----------------------------------------------------------------

def _read_json_file(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InvalidInput(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{path} is not valid JSON: {exc}") from exc


def _load_spec(args) -> RecurrenceSpec:
    if args.preset:
        return preset(args.preset)
    return RecurrenceSpec.from_json(_read_json_file(args.spec))


def _load_base(text: str | None) -> BaseSpec:
    if text is None:
        return BaseSpec.integer(10)
    try:
        return BaseSpec.integer(int(text))
    except ValueError:
        return BaseSpec.from_json(_read_json_file(text))


# -- output -----------------------------------------------------------------

def _csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerows(rows)
    return buf.getvalue()


def _emit(args, payload: dict, rows=None) -> None:
    if args.format == "csv" and rows is not None:
        sys.stdout.write(_csv(rows))
    else:
        sys.stdout.write(json.dumps(payload, indent=2) + "\n")


# -- commands ---------------------------------------------------------------

def cmd_check(args) -> int:
    spec = _load_spec(args)
    K = _load_base(args.base).field if args.base else spec.field
    if spec.field.d is None and K.d is None:
        K = QQ
    cd = characteristic_data(spec, args.precision)
    rep = check_hypotheses(spec, K, cd)
    payload = {"command": "check", "spec": spec.to_json(), "precision": args.precision,
               **rep.to_json(), "characteristic": cd.to_json()}
    rows = [["hypothesis", "verdict"]] + [[k, v.value] for k, v in rep.verdicts.items()]
    _emit(args, payload, rows)
    return EXIT_HYPOTHESIS if rep.failures() else EXIT_OK


def cmd_search(args) -> int:
    spec, base = _load_spec(args), _load_base(args.base)
    if args.n_max < 0 or args.n_min < 0:
        raise InvalidInput("index bounds must be nonnegative")
    rep = enumerate_solutions(spec, base, (args.n_min, args.n_max), args.distinct, args.jobs,
                              args.method, args.precision)
    payload = {"command": "search", **rep.to_json()}
    if args.format == "csv":
        sys.stdout.write(rep.to_csv())
    else:
        _emit(args, payload)
    return EXIT_OK


def cmd_certify(args) -> int:
    spec, base = _load_spec(args), _load_base(args.base)
    rep = certify(spec, base, cap=args.cap, distinct=args.distinct, jobs=args.jobs, prec=args.precision)
    payload = {"command": "certify", **rep.to_json(with_trace=args.trace)}
    if args.format == "csv":
        sys.stdout.write(rep.to_csv())
    else:
        _emit(args, payload)
    return EXIT_HYPOTHESIS if rep.status["kind"] == "Failed" else EXIT_OK


def cmd_bound(args) -> int:
    spec, base = _load_spec(args), _load_base(args.base)
    cd = characteristic_data(spec, args.precision)
    res = bound(cd, base, args.precision)
    payload = {"command": "bound", "spec": spec.to_json(), "base": base.to_json(),
               "precision": args.precision, **res.to_json(with_trace=args.trace)}
    rows = [["name", "formula_id", "value"]]
    for r in res.trace:
        v = r.to_json()["value"]
        rows.append([r.name, r.formula, v["mid"] if isinstance(v, dict) else v])
    _emit(args, payload, rows)
    return EXIT_OK


def cmd_height(args) -> int:
    coeffs = _json_arg(args.minpoly)
    if not isinstance(coeffs, list) or len(coeffs) < 2 or not all(isinstance(c, int) for c in coeffs):
        raise InvalidInput("--minpoly must be a JSON list of at least two integers")
    if not polys.is_irreducible(coeffs):
        raise InvalidInput("polynomial is not irreducible over Q")
    prim = polys.primitive(coeffs)
    h = height_of_minpoly(prim, args.tol, max(128, args.precision))
    payload = {"command": "height", "minpoly": prim, "height": h.to_json(), "precision": args.precision}
    _emit(args, payload, [["minpoly", "height_mid", "height_rad"], [json.dumps(prim), *h.to_json().values()]])
    return EXIT_OK


def cmd_expand(args) -> int:
    base = _load_base(args.base)
    alpha = base.field.parse(_json_arg(args.value))
    payload = {"command": "expand", "base": base.to_json(), "value": value_to_json(alpha)}
    try:
        s = expand(alpha, base, args.digit_cap)
        payload.update(status="ok", digits=list(s.digits), rendered=s.render(base.alphabet_size))
        rows = [["value", "digits"], [json.dumps(value_to_json(alpha)), payload["rendered"]]]
    except NoExpansion as exc:
        payload.update(status="NoExpansion", reason=str(exc))
        rows = [["value", "digits"], [json.dumps(value_to_json(alpha)), ""]]
    _emit(args, payload, rows)
    return EXIT_OK


def cmd_eval(args) -> int:
    base = _load_base(args.base)
    s = DigitString.parse(args.digits)
    v = evaluate(s, base)
    payload = {"command": "eval", "base": base.to_json(), "digits": list(s.digits), "value": value_to_json(v)}
    _emit(args, payload, [["digits", "value"], [s.render(base.alphabet_size), json.dumps(value_to_json(v))]])
    return EXIT_OK


def cmd_match(args) -> int:
    s = DigitString.parse(args.digits)
    pats = match_pattern(s, args.distinct)
    payload = {"command": "match", "digits": list(s.digits), "patterns": [p.to_json() for p in pats]}
    rows = [["d1", "d2", "l", "m"]] + [[p.d1, p.d2, p.l, p.m] for p in pats]
    _emit(args, payload, rows)
    return EXIT_OK


COMMANDS = {"check": cmd_check, "search": cmd_search, "certify": cmd_certify, "bound": cmd_bound,
            "height": cmd_height, "expand": cmd_expand, "eval": cmd_eval, "match": cmd_match}


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError:
        return EXIT_USAGE
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "jobs", 1) < 1:
        sys.stderr.write("--jobs must be at least 1\n")
        return EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except HypothesisViolation as exc:
        sys.stderr.write(f"hypothesis failure: {exc}\n")
        return EXIT_HYPOTHESIS
    except (InvalidInput, RepeatedRoots) as exc:
        sys.stderr.write(f"invalid input: {exc}\n")
        return EXIT_INVALID
    except ToolkitError as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
