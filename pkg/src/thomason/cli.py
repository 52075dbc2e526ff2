"""Command line front end.

Every report is a JSON document (or a plain-text rendering of it) carrying
a schema version and the full option set, defaults included, so that a
report can be reproduced from itself.  Exit status: 0 on success, 1 when a
check fails, 2 on input errors.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from collections import Counter
from typing import List, Optional, Tuple

from . import __version__
from .complexes import koszul
from .engine import (QuotientModule, all_ideals_artinian, koszul_generators, obstruction_pipeline, round_trip,
                     truncate)
from .errors import ParseError, ThomasonError
from .localcoh import cech_cohomology, infinite_generation_certificate
from .modules import GradedModule
from .poset import CONSTRAINTS, classify, enumerate_filtrations
from .textformat import Document, dump_complex, dump_ring, load, loads

SCHEMA = "thomason.report/1"

DEFAULTS = {
    "window": "-3:3",
    "degrees": None,
    "budget": 5,
    "format": "json",
    "threshold": 0,
    "ideal": None,
    "index": None,
    "certificate_threshold": None,
    "constraint": "all",
    "limit": 50,
}


class CheckFailed(Exception):
    def __init__(self, report):
        self.report = report


def _range(text: Optional[str], flag: str) -> Optional[Tuple[int, int]]:
    if text is None:
        return None
    try:
        lo, hi = text.split(":")
        return int(lo), int(hi)
    except ValueError:
        raise ParseError("%s expects LO:HI, got %r" % (flag, text))


def _need(doc: Document, *what):
    for w in what:
        if getattr(doc, w) is None:
            raise ParseError("the input needs a [%s] section" % w)


def _ideal(doc: Document, args) -> List[str]:
    if args.ideal:
        return [g.strip() for g in args.ideal.split(",") if g.strip()]
    if doc.ring is not None and doc.ring.local is not None:
        return [doc.ring.format(g) for g in doc.ring.primes[doc.ring.local]]
    raise ParseError("no --ideal given and the ring has no local maximal ideal")


def _input_complex(doc: Document, args):
    if doc.complex is not None:
        return doc.complex
    if doc.module is not None:
        return QuotientModule(doc.ring, doc.module["quotient"], doc.module["degree"])
    # no complex given: the ring itself in degree 0
    return QuotientModule(doc.ring, [], 0)


# --- commands --------------------------------------------------------------------


def cmd_classify(doc, args):
    _need(doc, "poset", "filtration")
    v = classify(doc.poset, doc.filtration)
    return {"verdict": v.to_dict(), "filtration": doc.filtration.describe(), "poset": doc.poset.describe()}


def cmd_enumerate(doc, args):
    _need(doc, "poset")
    lo, hi = _range(args.window, "--window")
    budget = args.budget if args.budget_given else None
    kinds = Counter()
    listed = []
    total = 0
    for Phi in enumerate_filtrations(doc.poset, lo, hi, args.constraint, budget=budget):
        v = classify(doc.poset, Phi)
        kinds[v.kind.value] += 1
        total += 1
        if len(listed) < args.limit:
            listed.append({"filtration": Phi.describe(), "verdict": v.kind.value})
    return {"count": total, "by_kind": dict(sorted(kinds.items())), "listed": listed,
            "truncated_listing": total > len(listed)}


def cmd_koszul(doc, args):
    _need(doc, "ring")
    K = koszul(doc.ring, _ideal(doc, args))
    text = dump_ring(doc.ring) + "\n" + dump_complex(K)
    if args.format == "toml":
        return text
    G = K.realize(_range(args.degrees, "--degrees"))
    return {"document": text, "complex": K.describe(),
            "homology": {str(n): {str(d): k for d, k in row.items()} for n, row in G.homology_table().items()},
            "internal_window": [G.lo, G.hi], "mode": "exact" if G.exact else "windowed"}


def cmd_truncate(doc, args):
    _need(doc, "ring", "filtration")
    C = _input_complex(doc, args)
    n = args.index if args.index is not None else 1
    degs = _range(args.degrees, "--degrees")
    degrees = list(range(degs[0], degs[1] + 1)) if degs else None
    if isinstance(C, QuotientModule) and degrees is None and not C.ring.is_artinian:
        raise ParseError("--degrees is required for windowed modules")
    res = truncate(C, doc.filtration, n, degrees=degrees)
    out = res.to_dict(degrees)
    if not res.ok:
        raise CheckFailed(out)
    return out


def cmd_localcoh(doc, args):
    _need(doc, "ring")
    R = doc.ring
    xs = _ideal(doc, args)
    i = args.index if args.index is not None else 0
    window = _range(args.window, "--window") if args.window_given else None
    quotient = doc.module["quotient"] if doc.module else []
    if R.is_artinian:
        M = GradedModule.cyclic(R, quotient)
        table = cech_cohomology(M, xs, i, window)
    else:
        if window is None:
            raise ParseError("--window is required over a non-Artinian ring")
        table = cech_cohomology(R, xs, i, window, module_ideal=quotient)
    out = {"ideal": xs, "index": i, "dims": {str(d): k for d, k in table.items()},
           "total": sum(table.values()), "engine": "exact" if R.is_artinian else "monomial"}
    if args.certificate_threshold is not None:
        if R.is_artinian:
            raise ParseError("certificates are for non-Artinian rings")
        cert = infinite_generation_certificate(R, xs, i, window, threshold=args.certificate_threshold,
                                               module_ideal=quotient)
        out["certificate"] = cert.to_dict()
        if not cert.accepted:
            raise CheckFailed(out)
    return out


def cmd_obstruct(doc, args):
    _need(doc, "ring", "filtration")
    cert = obstruction_pipeline(doc.ring, doc.filtration, budget=args.budget)
    out = cert.to_dict()
    if out["perfect"]:
        raise CheckFailed(out)
    return out


def _ideals(doc):
    if doc.ideals is not None:
        return doc.ideals
    return all_ideals_artinian(doc.ring)


def cmd_generators(doc, args):
    _need(doc, "ring", "filtration")
    R = doc.ring
    rng = _range(args.window, "--window")
    gens = koszul_generators(doc.filtration, _ideals(doc), rng, R)
    return {"index_range": list(rng), "count": len(gens), "generators": [g.describe(R) for g in gens]}


def cmd_roundtrip(doc, args):
    _need(doc, "ring", "poset")
    R = doc.ring
    ideals = _ideals(doc)
    if doc.filtration is not None:
        filts = [doc.filtration]
    else:
        lo, hi = _range(args.window, "--window")
        filts = list(enumerate_filtrations(doc.poset, lo, hi))
    rows = [round_trip(Phi, R, ideals) for Phi in filts]
    failed = [r for r in rows if not r["ok"]]
    out = {"checked": len(rows), "failed": len(failed), "failures": failed,
           "ideals": [[R.format(R.poly(g)) for g in a] for a in ideals]}
    if failed:
        raise CheckFailed(out)
    return out


def cmd_verify(doc, args):
    from .verify import run_all
    out = run_all()
    if out["failed"]:
        raise CheckFailed(out)
    return out


COMMANDS = {
    "classify": (cmd_classify, "verdict for the filtration of the input"),
    "enumerate": (cmd_enumerate, "enumerate filtrations on --window and tally verdicts"),
    "koszul": (cmd_koszul, "Koszul complex on --ideal, emitted in the text format"),
    "truncate": (cmd_truncate, "truncate the input complex or module at cut --index"),
    "localcoh": (cmd_localcoh, "local cohomology dims H^--index_(--ideal) on --window"),
    "obstruct": (cmd_obstruct, "perfectness obstruction certificate at the maximal point"),
    "generators": (cmd_generators, "Koszul generators of the aisle on the index range --window"),
    "roundtrip": (cmd_roundtrip, "check that filtrations are recovered from aisle membership"),
    "verify": (cmd_verify, "run the built-in invariant suite"),
}


# --- output -------------------------------------------------------------------------


def _render_table(obj, indent=0) -> List[str]:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k in sorted(obj, key=str):
            v = obj[k]
            if isinstance(v, (dict, list)) and v:
                lines.append("%s%s:" % (pad, k))
                lines.extend(_render_table(v, indent + 1))
            else:
                lines.append("%s%s: %s" % (pad, k, json.dumps(v) if not isinstance(v, str) else v))
    elif isinstance(obj, list):
        if all(not isinstance(v, (dict, list)) for v in obj):
            lines.append(pad + ", ".join(str(v) for v in obj))
        else:
            for k, v in enumerate(obj):
                lines.append("%s- [%d]" % (pad, k))
                lines.extend(_render_table(v, indent + 1))
    else:
        lines.append(pad + str(obj))
    return lines


def _options(args) -> dict:
    out = {}
    for k in DEFAULTS:
        out[k] = getattr(args, k)
    return out


def _emit(report: dict, fmt: str, stream):
    if fmt == "table":
        stream.write("\n".join(_render_table(report)) + "\n")
    else:
        stream.write(json.dumps(report, sort_keys=True, indent=2) + "\n")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="thomason", description="Thomason filtrations and t-structures on desk rings.")
    p.add_argument("--version", action="version", version="thomason " + __version__)
    sub = p.add_subparsers(dest="command", required=True)
    for name, (_, helptext) in COMMANDS.items():
        s = sub.add_parser(name, help=helptext)
        s.add_argument("input", nargs="?" if name == "verify" else None,
                       help="input document (TOML); '-' reads standard input")
        s.add_argument("--window", default=None, help="integer window LO:HI (default %s)" % DEFAULTS["window"])
        s.add_argument("--degrees", default=None, help="internal degree window LO:HI")
        s.add_argument("--budget", type=int, default=None, help="step/enumeration budget (default 5)")
        s.add_argument("--format", choices=["json", "table", "toml"] if name == "koszul" else ["json", "table"],
                       default=DEFAULTS["format"])
        s.add_argument("--threshold", type=int, default=DEFAULTS["threshold"], help="acceptance threshold")
        s.add_argument("--ideal", default=None, help="comma-separated generators (default: the local maximal ideal)")
        s.add_argument("--index", type=int, default=None, help="cohomological index or truncation cut")
        s.add_argument("--certificate-threshold", type=int, default=None, dest="certificate_threshold",
                       help="emit an infinite-generation certificate with this total threshold")
        s.add_argument("--constraint", choices=CONSTRAINTS, default=DEFAULTS["constraint"])
        s.add_argument("--limit", type=int, default=DEFAULTS["limit"], help="filtrations listed by enumerate")
    return p


RANGE_FLAGS = ("--window", "--degrees")


def _glue_ranges(argv: List[str]) -> List[str]:
    """``--window -3:3`` looks like an option to argparse; rewrite it as ``--window=-3:3``."""
    out, k = [], 0
    while k < len(argv):
        a = argv[k]
        if a in RANGE_FLAGS and k + 1 < len(argv) and re.fullmatch(r"-?\d+:-?\d+", argv[k + 1]):
            out.append("%s=%s" % (a, argv[k + 1]))
            k += 2
            continue
        out.append(a)
        k += 1
    return out


def run(argv: Optional[List[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    argv = _glue_ranges(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    args.window_given = args.window is not None
    args.budget_given = args.budget is not None
    if args.window is None:
        args.window = DEFAULTS["window"]
    if args.budget is None:
        args.budget = DEFAULTS["budget"]
    if args.threshold is not None and args.certificate_threshold is None and args.command == "localcoh" \
            and args.threshold != DEFAULTS["threshold"]:
        args.certificate_threshold = args.threshold
    fn = COMMANDS[args.command][0]
    report = {"schema": SCHEMA, "command": args.command, "version": __version__, "options": _options(args),
              "input": args.input}
    fmt = args.format
    try:
        doc = None
        if args.input is not None:
            doc = loads(sys.stdin.read()) if args.input == "-" else load(args.input)
        result = fn(doc, args)
        if isinstance(result, str):
            stdout.write(result)
            return 0
        report["status"] = "ok"
        report["result"] = result
        _emit(report, "json" if fmt == "toml" else fmt, stdout)
        return 0
    except CheckFailed as e:
        report["status"] = "check-failed"
        report["result"] = e.report
        _emit(report, "json" if fmt == "toml" else fmt, stdout)
        return 1
    except ThomasonError as e:
        report["status"] = "error"
        report["error"] = e.to_dict()
        _emit(report, "json" if fmt == "toml" else fmt, stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
