"""Command-line surface: generate, groebner, eliminate, hilbert, verify,
certify, bench, report.

Exit codes: 0 success, 1 verification failure, 2 resource-capped, 3 input
error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import model, orders, pipeline
from .exterior import (
    all_minor_certificates,
    format_certificate,
    minor_certificate,
    verify_certificate,
)
from .groebner import IdealBasis, ResourceCap, buchberger
from .hilbert import (
    gorenstein_check,
    hilbert_series_quotient,
    laurent_at_one,
)
from .model import GramRing, PhaseRing, build_ideals
from .pipeline import (
    CaseError,
    CaseSpec,
    benchmark_orders,
    cache_load,
    parse_generator_file,
    run_case,
    serialize_generators,
    verify_suite,
)
from .poly import ParseError, format_poly

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_CAPPED = 2
EXIT_INPUT = 3


def _parse_header(text):
    for line in text.splitlines():
        line = line.strip()
        if not line.startswith("#"):
            continue
        fields = dict(
            item.split("=", 1) for item in line[1:].split() if "=" in item
        )
        if {"k", "n", "group", "kind"} <= set(fields):
            return (
                int(fields["k"]),
                int(fields["n"]),
                fields["group"],
                fields["kind"],
            )
    raise CaseError("generator file lacks a '# k=.. n=.. group=.. kind=..' header")


def _ring_for_kind(k, n, group, kind):
    if kind == "moment":
        return PhaseRing(k, n).ring
    if kind in ("quadratic", "elimination"):
        spec = CaseSpec(k, n, group, allow_any_so_n=True)
        gr, _ = pipeline.quadratic_ideal(spec)
        return gr.ring
    if kind in ("workflow", "so-determinants"):
        spec = CaseSpec(k, n, group, allow_any_so_n=True)
        _, ring, _ = pipeline.workflow_ring(spec)
        return ring
    raise CaseError(f"unknown generator kind {kind!r}")


def _load_generator_file(path):
    with open(path) as f:
        text = f.read()
    k, n, group, kind = _parse_header(text)
    ring = _ring_for_kind(k, n, group, kind)
    return (k, n, group, kind), ring, parse_generator_file(text, ring)


def _emit(args, payload, text):
    if getattr(args, "json", False):
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


def _spec_from_args(args, order=True):
    kwargs = {
        "k": args.k,
        "n": args.n,
        "group": args.group,
        "allow_any_so_n": getattr(args, "allow_any_so_n", False),
    }
    if order:
        kwargs["order_name"] = args.order
    spec = CaseSpec(**kwargs)
    if getattr(args, "no_cap", False):
        spec = spec.uncapped()
    return spec


def cmd_generate(args):
    spec = _spec_from_args(args, order=False)
    pr, gr, shell, quad = build_ideals(spec.k, spec.n, spec.group)
    sections = []
    if args.kind in ("all", "moment"):
        sections.append(
            serialize_generators(spec, pr.ring, shell.polynomials, "moment")
        )
    if args.kind in ("all", "quadratic"):
        sections.append(
            serialize_generators(spec, gr.ring, quad.polynomials, "quadratic")
        )
    if args.kind in ("all", "so-determinants") and spec.group == "SO":
        _, ring, _ = pipeline.workflow_ring(spec)
        polys = [
            ring.var(name) - poly.substitute(
                {nm: ring.var(nm) for nm in pr.ring.names}, ring
            )
            for name, poly in model.so_determinant_generators(pr)
        ]
        sections.append(
            serialize_generators(spec, ring, polys, "so-determinants")
        )
    text = "".join(sections)
    if args.out:
        with open(args.out, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_groebner(args):
    meta, ring, gens = _load_generator_file(args.input)
    if args.order == "grevlex":
        order = orders.grevlex(ring)
    elif args.order == "lex":
        order = orders.lex(ring)
    else:
        raise CaseError("groebner on a file supports orders lex and grevlex")
    caps = {}
    if not args.no_cap:
        caps = {
            "max_pairs": pipeline.DEFAULT_MAX_PAIRS,
            "max_basis": pipeline.DEFAULT_MAX_BASIS,
        }
    result = buchberger(gens, order, **caps)
    lines = [format_poly(g) for g in result.basis]
    payload = {
        "order": order.fingerprint(),
        "size": len(result.basis),
        "complete": result.complete,
        "basis": lines,
    }
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK if result.complete else EXIT_CAPPED


def cmd_eliminate(args):
    spec = _spec_from_args(args)
    record, cached = run_case(spec, cache_dir=args.cache_dir)
    text = _render_report(record)
    if cached:
        text += "\n(from cache)"
    _emit(args, record, text)
    if record["status"] == "resource-capped":
        return EXIT_CAPPED
    if record["verdict"] == "mismatch":
        return EXIT_VERIFY
    return EXIT_OK


def _render_report(record):
    lines = [
        "case ({k},{n},{group}) order={order} status={status} verdict={verdict}".format(
            **record
        )
    ]
    if record.get("elimination_size") is not None:
        lines.append(f"  elimination ideal: {record['elimination_size']} generators")
    for tag, key in (("R", "hilbert_r"), ("Q", "hilbert_q")):
        rec = record.get(key)
        if not rec:
            continue
        flags = []
        if rec["gorenstein"]:
            flags.append("gorenstein")
        if rec["graded_gorenstein"]:
            flags.append("graded")
        lines.append(
            "  Hilbert {}: {}  d={} a={} {}".format(
                tag,
                rec["series"],
                rec["dimension"],
                rec["a_invariant"],
                " ".join(flags),
            ).rstrip()
        )
    timings = record.get("timings") or {}
    if timings:
        lines.append(
            "  timings: "
            + " ".join(f"{k}={v}s" for k, v in sorted(timings.items()))
        )
    return "\n".join(lines)


def cmd_hilbert(args):
    if args.input:
        meta, ring, gens = _load_generator_file(args.input)
        ideal = IdealBasis(ring, gens)
    else:
        spec = _spec_from_args(args, order=False)
        _, ideal = pipeline.quadratic_ideal(spec)
    caps = {}
    if not args.no_cap:
        caps = {
            "max_pairs": pipeline.DEFAULT_MAX_PAIRS,
            "max_basis": pipeline.DEFAULT_MAX_BASIS,
        }
    series = hilbert_series_quotient(ideal, **caps)
    sat, graded = gorenstein_check(series)
    laurent = laurent_at_one(series, 4)
    payload = series.record()
    payload.update(
        {
            "series": str(series),
            "gorenstein": sat,
            "graded_gorenstein": graded,
            "laurent_at_one": [str(c) for c in laurent],
        }
    )
    text = "\n".join(
        [
            str(series),
            f"d={series.dimension} a={series.a_invariant}"
            f" gorenstein={sat} graded={graded}",
            "laurent at t=1: " + ", ".join(str(c) for c in laurent),
        ]
    )
    _emit(args, payload, text)
    return EXIT_OK


def cmd_verify(args):
    summary = verify_suite(
        k_range=range(1, args.kmax + 1), n_range=range(1, args.nmax + 1)
    )
    text = f"{summary['passed']}/{summary['checked']} identity checks passed"
    for name in summary["failures"]:
        text += f"\n  FAIL {name}"
    _emit(args, summary, text)
    return EXIT_OK if not summary["failures"] else EXIT_VERIFY


def _parse_index_set(text):
    return tuple(int(s) for s in text.split(","))


def cmd_certify(args):
    gr = GramRing(args.k)
    if args.rows or args.cols:
        if not (args.rows and args.cols):
            raise CaseError("certify needs both --rows and --cols, or neither")
        certs = [
            minor_certificate(
                gr, _parse_index_set(args.rows), _parse_index_set(args.cols)
            )
        ]
    else:
        certs = all_minor_certificates(gr)
    ok = all(verify_certificate(c, gr) for c in certs)
    lines = [format_certificate(c) for c in certs]
    payload = {"k": args.k, "verified": ok, "certificates": lines}
    _emit(args, payload, "\n".join(lines + [f"verified: {ok}"]))
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_bench(args):
    spec = _spec_from_args(args, order=False)
    if args.no_cap:
        spec = spec.uncapped()
    names = [s.strip() for s in args.orders.split(",") if s.strip()]
    rows = benchmark_orders(spec, names, time_budget=args.budget)
    lines = []
    for row in rows:
        status = "complete" if row["complete"] else "capped"
        extra = "" if row.get("consistent", True) else " INCONSISTENT"
        lines.append(
            f"{row['order']:>8}: {row['elapsed']:.2f}s {status}{extra}"
        )
    payload = {"k": spec.k, "n": spec.n, "rows": rows}
    _emit(args, payload, "\n".join(lines))
    if not all(row["complete"] for row in rows):
        return EXIT_CAPPED
    if not all(row.get("consistent", True) for row in rows):
        return EXIT_VERIFY
    return EXIT_OK


def cmd_report(args):
    spec = _spec_from_args(args)
    hit = cache_load(args.cache_dir, spec)
    if hit is None:
        print("no cached entry for this case", file=sys.stderr)
        return EXIT_INPUT
    record, _, _ = hit
    _emit(args, record, _render_report(record))
    return EXIT_OK


def _add_case_arguments(p, order=True):
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--group", choices=["O", "SO"], default="O")
    if order:
        p.add_argument(
            "--order", choices=list(pipeline.ORDER_NAMES), default="paper"
        )
    p.add_argument("--allow-any-so-n", action="store_true")
    p.add_argument("--no-cap", action="store_true")
    p.add_argument("--json", action="store_true")
    p.add_argument("--seed", type=int, default=0)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="momentq",
        description="Moment-map and Gram-relation ideals of particle quotients",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="emit generator files")
    _add_case_arguments(p, order=False)
    p.add_argument(
        "--kind",
        choices=["all", "moment", "quadratic", "so-determinants"],
        default="all",
    )
    p.add_argument("--out")
    p.set_defaults(fn=cmd_generate)

    p = sub.add_parser("groebner", help="Groebner basis of a generator file")
    p.add_argument("--input", required=True)
    p.add_argument("--order", choices=["lex", "grevlex"], default="grevlex")
    p.add_argument("--no-cap", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_groebner)

    p = sub.add_parser("eliminate", help="run the elimination workflow")
    _add_case_arguments(p)
    p.add_argument("--cache-dir")
    p.set_defaults(fn=cmd_eliminate)

    p = sub.add_parser("hilbert", help="Hilbert series and Gorenstein flags")
    _add_case_arguments(p, order=False)
    p.add_argument("--input")
    p.set_defaults(fn=cmd_hilbert)

    p = sub.add_parser("verify", help="run the identity suite")
    p.add_argument("--kmax", type=int, default=3)
    p.add_argument("--nmax", type=int, default=4)
    p.add_argument("--json", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("certify", help="minor certificates")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--rows")
    p.add_argument("--cols")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_certify)

    p = sub.add_parser("bench", help="benchmark monomial orders")
    _add_case_arguments(p, order=False)
    p.add_argument("--orders", default="paper,lex")
    p.add_argument("--budget", type=float, default=900.0)
    p.set_defaults(fn=cmd_bench)

    p = sub.add_parser("report", help="render a cached case")
    _add_case_arguments(p)
    p.add_argument("--cache-dir", required=True)
    p.set_defaults(fn=cmd_report)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except ResourceCap:
        print("resource cap exceeded; rerun with --no-cap", file=sys.stderr)
        return EXIT_CAPPED
    except (CaseError, ParseError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
