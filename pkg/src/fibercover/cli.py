"""Command-line front end.

Exit codes: 0 success, 1 invalid spec, 2 numerical failure, 3 a claim check
produced a counterexample candidate.
"""

from __future__ import annotations

import argparse
import sys
import time

from fibercover import __version__
from fibercover.commands import HANDLERS, Options, check_claims
from fibercover.errors import InvalidSpecError, NumericalError
from fibercover.fileformat import dumps, read_spec, to_document
from fibercover.render import render_csv, render_svg, render_text

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_NUMERICAL = 2
EXIT_COUNTEREXAMPLE = 3


def _complex_arg(text: str) -> complex:
    try:
        return complex(text.replace(" ", ""))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


def _positive_int(text: str) -> int:
    n = int(text)
    if n < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return n


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--csv", metavar="PATH", help="write records as CSV")
    common.add_argument("--svg", metavar="PATH", help="write a static SVG sketch")
    common.add_argument("--tol", type=float, default=None, help="numerical tolerance (default 1e-10)")
    common.add_argument("--trunc", type=_positive_int, default=None,
                        help="truncation length for product specs (default: the file's, else 500)")
    common.add_argument("--check-paper-claims", action="store_true", help="run and list claim checks")
    common.add_argument("--strict-pointwise", action="store_true",
                        help="require pointwise rather than setwise invariance (isom)")
    common.add_argument("--no-timing", action="store_true", help="omit the elapsed-time line")
    common.add_argument("--seed", type=int, default=None, help="seed for randomized runs")
    common.add_argument("--emit-normalized", metavar="PATH", help="write the normalized spec file")

    parser = argparse.ArgumentParser(prog="fibercover", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"fibercover {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "analyze-cover": "components, ends and genus of a finite cover",
        "fiber-product": "normalization, singular points and connectedness of a fiber product",
        "ends": "ends of an infinite model or infinite fiber product",
        "exhaust": "exterior components and interior genus along growing discs",
        "weval": "evaluate a truncated canonical product",
        "lift": "lift a polyline to a superelliptic curve",
        "monodromy": "numeric monodromy of a superelliptic curve against the constructed cycles",
        "isom": "affine equivalence of zero configurations",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("spec", help="JSON spec file")
        if name == "exhaust":
            p.add_argument("--radii", type=float, nargs="+", help="override the radii in the file")
        if name == "weval":
            p.add_argument("--at", type=_complex_arg, nargs="+", help="evaluation points, e.g. 0.5 or 1+2j")
    p = sub.add_parser("check-claims", parents=[common], help="claim checks for a file, or seeded random batches")
    p.add_argument("spec", nargs="?", help="JSON spec file; omit to run random batches")
    p.add_argument("--count", type=_positive_int, default=100, help="instances per random batch")
    return parser


def _options(args) -> Options:
    return Options(
        tol=args.tol,
        trunc=args.trunc,
        check_claims=args.check_paper_claims,
        strict_pointwise=args.strict_pointwise,
        radii=tuple(args.radii) if getattr(args, "radii", None) else None,
        points=tuple(args.at) if getattr(args, "at", None) else None,
        seed=args.seed,
        count=getattr(args, "count", 100),
    )


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    opts = _options(args)
    started = time.perf_counter()
    try:
        parsed = read_spec(args.spec) if args.spec else None
        if parsed is not None and args.emit_normalized:
            _write(args.emit_normalized, dumps(to_document(parsed)))
        if args.command == "check-claims":
            if parsed is None and args.seed is None:
                raise InvalidSpecError("give a spec file or --seed", "spec")
            report = check_claims(parsed, opts)
        else:
            report = HANDLERS[args.command](parsed, opts)
    except OSError as exc:
        print(f"error: cannot read {args.spec}: {exc.strerror}", file=sys.stderr)
        return EXIT_INVALID
    except InvalidSpecError as exc:
        print(f"error: invalid spec: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except NumericalError as exc:
        print(f"error: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    elapsed = None if args.no_timing else time.perf_counter() - started
    sys.stdout.write(render_text(report, elapsed))
    if args.csv:
        _write(args.csv, render_csv(report))
    if args.svg:
        _write(args.svg, render_svg(report))
    return EXIT_COUNTEREXAMPLE if report.has_counterexample else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
