"""Command-line front end.

Subcommands: measure, discrepancy, verify-lemma, search-min, scan,
generate. Every run embeds its configuration in the output for
provenance, and identical configurations produce byte-identical output
(no timestamps or environment data in the payload).

Exit codes: 0 on success, 1 when verify-lemma finds a failed checkpoint,
2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import io
import json
import sys
from typing import Optional

from .bitcore import parse_bits
from .discrepancy import (
    PointSet,
    extreme_discrepancy,
    parse_points_file,
)
from .generators import GeneratorSpec
from .measure import normality_fast, normality_naive
from .orbit import lemma1_verify, orbit_points
from .search import QUANTILE_KEYS, exhaustive_min, typical_scan

__all__ = ["run", "main"]

MAX_INLINE_BITS = 1 << 16


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="normbits",
        description="Exact normality-measure and orbit-discrepancy toolkit",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_common(p: argparse.ArgumentParser, formats=("json", "csv")) -> None:
        p.add_argument("--format", choices=formats, default="json")
        p.add_argument("--output", default=None, help="output path (default stdout)")

    p = sub.add_parser("measure", help="normality measure of a bit sequence")
    p.add_argument("--bits", help=f"inline bit string (at most {MAX_INLINE_BITS})")
    p.add_argument("--input", help="path to a bit-text file")
    p.add_argument("--gen", help="generator spec (needs --n)")
    p.add_argument("--n", type=int, help="number of generated digits")
    p.add_argument("--algorithm", choices=("fast", "naive"), default="fast")
    add_common(p)

    p = sub.add_parser("discrepancy", help="extreme/star discrepancy of points")
    p.add_argument("--points", help="path to a file of num/2^w lines")
    p.add_argument("--gen", help="generator spec for orbit points (needs --n)")
    p.add_argument("--n", type=int, help="number of orbit points")
    p.add_argument("--w", type=int, default=64, help="orbit window bits")
    add_common(p)

    p = sub.add_parser("verify-lemma", help="check measure <= envelope bound")
    p.add_argument("--gen", required=True, help="generator spec")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--w", type=int, default=64)
    p.add_argument("--checkpoints", help="comma-separated list (default powers of 2)")
    p.add_argument("--threads", type=int, default=1)
    add_common(p)

    p = sub.add_parser("search-min", help="exact minimum over all sequences")
    p.add_argument("--n", required=True, help="length N, or a range A..B")
    p.add_argument("--cap", type=int, default=16, help="max witnesses kept")
    p.add_argument("--no-prune", action="store_true")
    p.add_argument("--split-depth", type=int, default=8)
    p.add_argument("--threads", type=int, default=1)
    add_common(p)

    p = sub.add_parser("scan", help="Monte Carlo quantiles of measure/sqrt(N)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    add_common(p)

    p = sub.add_parser("generate", help="emit digits of a generator")
    p.add_argument("--gen", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--output", default=None)

    return parser


def _emit(text: str, path: Optional[str]) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="ascii") as fh:
            fh.write(text)


def _json_payload(config: dict, body: dict) -> str:
    return json.dumps({"config": config, **body}, indent=2) + "\n"


def _csv_text(config: dict, header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    buf.write("# config: " + json.dumps(config) + "\n")
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join("" if v is None else str(v) for v in row) + "\n")
    return buf.getvalue()


def _load_sequence(args) -> BitSequence:
    sources = [s for s in (args.bits, args.input, args.gen) if s is not None]
    if len(sources) != 1:
        raise ValueError("provide exactly one of --bits, --input, --gen")
    if args.bits is not None:
        if len(args.bits) > MAX_INLINE_BITS:
            raise ValueError(
                f"--bits longer than {MAX_INLINE_BITS}; use --input with a file"
            )
        return parse_bits(args.bits)
    if args.input is not None:
        with open(args.input, "r", encoding="ascii") as fh:
            return parse_bits("".join(fh.read().split()))
    if args.n is None:
        raise ValueError("--gen requires --n")
    return GeneratorSpec.parse(args.gen).bits(args.n)


def _cmd_measure(args) -> int:
    seq = _load_sequence(args)
    config = {
        "subcommand": "measure",
        "bits": args.bits,
        "input": args.input,
        "gen": args.gen,
        "n": len(seq),
        "algorithm": args.algorithm,
        "format": args.format,
        "output": args.output,
    }
    evaluate = normality_fast if args.algorithm == "fast" else normality_naive
    report = evaluate(seq)
    if args.format == "json":
        _emit(_json_payload(config, {"report": report.to_json_dict()}), args.output)
    else:
        d = report.to_json_dict()
        rows = [
            [
                "max",
                d["k"],
                d["pattern"],
                d["M"],
                d["T"],
                d["value_num"],
                d["value_log2_den"],
                d["value_decimal"],
            ]
        ]
        rows += [
            ["per_k", e["k"], None, None, None, e["num"], e["log2_den"], e["decimal"]]
            for e in d["per_k"]
        ]
        header = ["kind", "k", "pattern", "M", "T", "num", "log2_den", "decimal"]
        _emit(_csv_text(config, header, rows), args.output)
    return 0


def _cmd_discrepancy(args) -> int:
    sources = [s for s in (args.points, args.gen) if s is not None]
    if len(sources) != 1:
        raise ValueError("provide exactly one of --points, --gen")
    if args.points is not None:
        points = parse_points_file(args.points)
    else:
        if args.n is None:
            raise ValueError("--gen requires --n")
        points = orbit_points(GeneratorSpec.parse(args.gen).stream(), args.n, args.w)
    config = {
        "subcommand": "discrepancy",
        "points": args.points,
        "gen": args.gen,
        "n": points.size,
        "w": args.w if args.gen else None,
        "format": args.format,
        "output": args.output,
    }
    report = extreme_discrepancy(points)
    if args.format == "json":
        _emit(_json_payload(config, {"report": report.to_json_dict()}), args.output)
    else:
        d = report.to_json_dict()
        rows = [
            ["extreme", d["extreme_num"], d["extreme_den"], d["extreme_decimal"]],
            ["star", d["star_num"], d["star_den"], d["star_decimal"]],
        ]
        _emit(_csv_text(config, ["stat", "num", "den", "decimal"], rows), args.output)
    return 0


def _cmd_verify(args) -> int:
    checkpoints = None
    if args.checkpoints:
        try:
            checkpoints = [int(c) for c in args.checkpoints.split(",") if c.strip()]
        except ValueError:
            raise ValueError(f"invalid checkpoint list {args.checkpoints!r}") from None
    config = {
        "subcommand": "verify-lemma",
        "gen": args.gen,
        "n": args.n,
        "w": args.w,
        "checkpoints": checkpoints,
        "threads": args.threads,
        "format": args.format,
        "output": args.output,
    }
    report = lemma1_verify(
        GeneratorSpec.parse(args.gen).stream(),
        args.n,
        args.w,
        checkpoints=checkpoints,
        threads=args.threads,
    )
    if args.format == "json":
        _emit(_json_payload(config, {"report": report.to_json_dict()}), args.output)
    else:
        rows = [
            [
                c.n,
                c.normality.num,
                c.normality.log2_den,
                c.phi.numerator,
                c.phi.denominator,
                c.margin.numerator,
                c.margin.denominator,
                c.passed,
            ]
            for c in report.checkpoints
        ]
        header = [
            "n",
            "normality_num",
            "normality_log2_den",
            "phi_num",
            "phi_den",
            "margin_num",
            "margin_den",
            "pass",
        ]
        _emit(_csv_text(config, header, rows), args.output)
    return 0 if report.overall_pass else 1


def _parse_n_range(text: str) -> list[int]:
    if ".." in text:
        lo_s, _, hi_s = text.partition("..")
        lo, hi = int(lo_s), int(hi_s)
        if lo > hi:
            raise ValueError(f"empty range {text!r}")
        return list(range(lo, hi + 1))
    return [int(text)]


def _cmd_search(args) -> int:
    ns = _parse_n_range(args.n)
    config = {
        "subcommand": "search-min",
        "n": args.n,
        "cap": args.cap,
        "prune": not args.no_prune,
        "split_depth": args.split_depth,
        "threads": args.threads,
        "format": args.format,
        "output": args.output,
    }
    results = [
        exhaustive_min(
            n,
            cap=args.cap,
            prune=not args.no_prune,
            split_depth=args.split_depth,
            threads=args.threads,
        )
        for n in ns
    ]
    if args.format == "json":
        body = {"reports": [r.to_json_dict() for r in results]}
        _emit(_json_payload(config, body), args.output)
    else:
        rows = [
            [
                r.n,
                r.min_value.num,
                r.min_value.log2_den,
                r.min_value.decimal(),
                r.witnesses[0].to01() if r.witnesses else None,
            ]
            for r in results
        ]
        header = ["N", "min_num", "min_log2_den", "min_decimal", "witness"]
        _emit(_csv_text(config, header, rows), args.output)
    return 0


def _cmd_scan(args) -> int:
    config = {
        "subcommand": "scan",
        "n": args.n,
        "samples": args.samples,
        "seed": args.seed,
        "format": args.format,
        "output": args.output,
    }
    stats = typical_scan(args.n, args.samples, args.seed)
    if args.format == "json":
        _emit(_json_payload(config, {"report": stats.to_json_dict()}), args.output)
    else:
        header = ["n", "samples", "seed"] + list(QUANTILE_KEYS)
        rows = [[stats.n, stats.samples, stats.seed] + [repr(q) for q in stats.quantiles]]
        _emit(_csv_text(config, header, rows), args.output)
    return 0


def _cmd_generate(args) -> int:
    seq = GeneratorSpec.parse(args.gen).bits(args.n)
    _emit(seq.to01() + "\n", args.output)
    return 0


_DISPATCH = {
    "measure": _cmd_measure,
    "discrepancy": _cmd_discrepancy,
    "verify-lemma": _cmd_verify,
    "search-min": _cmd_search,
    "scan": _cmd_scan,
    "generate": _cmd_generate,
}


def run(argv: list[str]) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 on --help
        return int(exc.code or 0)
    try:
        return _DISPATCH[args.subcommand](args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
