"""Command-line front end.

Commands: validate, cohomology, homology, simplify, core.  Reports go
to stdout as JSON, diagnostics to stderr.  Exit codes: 0 success,
1 usage, 2 parse/structure, 3 commutativity, 4 certification failure.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time

from . import __version__
from .cohomology import (
    HomologyResult,
    integral_homology,
    sheaf_cohomology,
)
from .documents import (
    DocumentError,
    document_space,
    dump_json,
    load_space,
    space_to_data,
)
from .poset import order_complex
from .sheaf import check_commutativity
from .simplify import (
    STRATEGIES,
    STRATEGY_BEATS,
    STRATEGY_CONSTANT_UPDOWN,
    SimplifyError,
    simplify_pipeline,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_COMMUTATIVITY = 3
EXIT_CERTIFICATION = 4


class _UsageExit(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageExit(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="posheaf", description=__doc__)
    parser.add_argument("--version", action="version", version=f"posheaf {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check structure and commutativity")
    p.add_argument("path")

    p = sub.add_parser("cohomology", help="sheaf cohomology Betti numbers")
    p.add_argument("path")
    p.add_argument("--max-degree", type=int, default=None)

    p = sub.add_parser("homology", help="integral homology of the order complex")
    p.add_argument("path")

    p = sub.add_parser("simplify", help="cohomology-preserving simplification")
    p.add_argument("path")
    p.add_argument("--strategy", choices=STRATEGIES, default=STRATEGY_BEATS)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None)

    p = sub.add_parser("core", help="beat-collapse to the core")
    p.add_argument("path")
    p.add_argument("--out", default=None)
    return parser


def _load_commutative_space(path):
    doc = load_space(path)
    sp = document_space(doc)
    ok, err = check_commutativity(sp.sheaf)
    if not ok:
        print(
            f"non-commuting diagram between {err.lower!r} and {err.upper!r}",
            file=sys.stderr,
        )
        raise SystemExit(EXIT_COMMUTATIVITY)
    return doc, sp


def _betti_report(h: HomologyResult) -> list[int]:
    return list(h.betti_trimmed())


def _torsion_report(h: HomologyResult) -> list[list[int]]:
    return [list(t) for t in h.torsion_trimmed()]


def cmd_validate(args) -> int:
    _load_commutative_space(args.path)
    print("ok")
    return EXIT_OK


def cmd_cohomology(args) -> int:
    doc, sp = _load_commutative_space(args.path)
    if doc.field_tag == "Z":
        print(
            "field 'Z' has no sheaf cohomology here; use the homology command",
            file=sys.stderr,
        )
        return EXIT_USAGE
    t0 = time.monotonic()
    h = sheaf_cohomology(sp)
    betti = _betti_report(h)
    if args.max_degree is not None:
        betti = betti[: args.max_degree + 1]
    report = {
        "generator": _generator(),
        "betti": betti,
        "sizes": {"elements": len(sp.poset)},
        "timing_ms": _ms(t0),
    }
    print(dump_json(report), end="")
    return EXIT_OK


def cmd_homology(args) -> int:
    doc = load_space(args.path)
    if doc.has_sheaf_block():
        print("warning: sheaf block ignored for integral homology", file=sys.stderr)
    sp = document_space(doc)
    t0 = time.monotonic()
    k = order_complex(sp.poset)
    unred = integral_homology(k, reduced=False)
    red = integral_homology(k, reduced=True)
    report = {
        "generator": _generator(),
        "betti": _betti_report(unred),
        "torsion": _torsion_report(unred),
        "reduced_betti": _betti_report(red),
        "reduced_torsion": _torsion_report(red),
        "sizes": {"elements": len(sp.poset)},
        "timing_ms": _ms(t0),
    }
    print(dump_json(report), end="")
    return EXIT_OK


def _cohomology_for_certification(doc, sp) -> HomologyResult:
    if doc.field_tag == "Z":
        return integral_homology(order_complex(sp.poset), reduced=True)
    return sheaf_cohomology(sp)


def _simplify_common(args, strategy: str) -> int:
    doc, sp = _load_commutative_space(args.path)
    if doc.field_tag == "Z" and strategy != STRATEGY_CONSTANT_UPDOWN:
        print(
            "field 'Z' supports only the constant-updown strategy",
            file=sys.stderr,
        )
        return EXIT_USAGE
    rng = random.Random(args.seed) if getattr(args, "seed", None) is not None else None
    t0 = time.monotonic()
    before = _cohomology_for_certification(doc, sp)
    try:
        result, trace = simplify_pipeline(sp, strategy, rng=rng)
    except SimplifyError as e:
        print(str(e), file=sys.stderr)
        return EXIT_USAGE
    after_doc_space = result
    after = _cohomology_for_certification(doc, after_doc_space)
    certified = before.same_groups(after)
    report = {
        "generator": _generator(strategy),
        "betti": _betti_report(before),
        "betti_after": _betti_report(after),
        "certified": certified,
        "trace": [{"removed": s.removed, "rule": s.rule} for s in trace.steps],
        "sizes": {"before": len(sp.poset), "after": len(result.poset)},
        "timing_ms": _ms(t0),
    }
    if doc.field_tag == "Z":
        report["torsion"] = _torsion_report(before)
        report["torsion_after"] = _torsion_report(after)
    out_data = space_to_data(result, doc.field_tag, generator=_generator(strategy))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(dump_json(out_data))
    else:
        report["document"] = out_data
    print(dump_json(report), end="")
    if not certified:
        print("certification failed: cohomology changed", file=sys.stderr)
        return EXIT_CERTIFICATION
    return EXIT_OK


def cmd_simplify(args) -> int:
    return _simplify_common(args, args.strategy)


def cmd_core(args) -> int:
    args.seed = None
    code = _simplify_common(args, STRATEGY_BEATS)
    return code


def _generator(strategy: str = None) -> dict:
    g = {"tool": "posheaf", "version": __version__}
    if strategy:
        g["strategy"] = strategy
    return g


def _ms(t0: float) -> int:
    return int((time.monotonic() - t0) * 1000)


_COMMANDS = {
    "validate": cmd_validate,
    "cohomology": cmd_cohomology,
    "homology": cmd_homology,
    "simplify": cmd_simplify,
    "core": cmd_core,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageExit as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return _COMMANDS[args.command](args)
    except DocumentError as e:
        print(f"invalid document: {e}", file=sys.stderr)
        return EXIT_PARSE
    except SystemExit as e:
        return int(e.code or 0)


def entry_point():
    raise SystemExit(main())


if __name__ == "__main__":
    entry_point()
