"""Command-line front end binding the parser, analyses and checkers.

Exit codes: 0 holds/ok, 1 fails/criteria-not-met, 2 input error,
3 inconclusive-at-bound.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import analysis, equations, specio
from .bisim import Bounds, NOTIONS, check
from .ruloids import explore, ruloids, transitions
from .specio import ParseError, parse, parse_term
from .terms import SignatureError

OK, FAIL, INPUT_ERROR, INCONCLUSIVE_AT_BOUND = 0, 1, 2, 3

_BOUND_KEYS = ("term_size", "depth", "state_cap", "pair_cap")


def _env_bounds() -> dict[str, int]:
    raw = os.environ.get("OPENSOS_BOUNDS", "")
    out: dict[str, int] = {}
    for piece in filter(None, (p.strip() for p in raw.split(","))):
        key, _, value = piece.partition("=")
        if key not in _BOUND_KEYS or not value.isdigit():
            raise SystemExit("invalid OPENSOS_BOUNDS entry %r" % piece)
        out[key] = int(value)
    return out


def _bounds_from(args) -> Bounds:
    merged = dict(_env_bounds())
    for key in _BOUND_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = value
    bounds = Bounds(**merged)
    if min(bounds.term_size, bounds.depth, bounds.state_cap, bounds.pair_cap) < 1:
        raise SystemExit("bounds must be positive")
    return bounds


def _add_bounds_flags(sub) -> None:
    sub.add_argument("--term-size", dest="term_size", type=int)
    sub.add_argument("--depth", dest="depth", type=int)
    sub.add_argument("--state-cap", dest="state_cap", type=int)
    sub.add_argument("--pair-cap", dest="pair_cap", type=int)


def _emit(payload: dict, as_json: bool, lines) -> None:
    if as_json:
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        for line in lines:
            print(line)


def _load(path: str) -> specio.SpecDocument:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        print("error: %s" % exc, file=sys.stderr)
        raise SystemExit(INPUT_ERROR)
    try:
        return parse(text)
    except (ParseError, SignatureError) as exc:
        print("%s: %s" % (path, exc), file=sys.stderr)
        raise SystemExit(INPUT_ERROR)


def _pick_tss(doc: specio.SpecDocument, name: str | None):
    if name is None:
        if not doc.tss_decls:
            print("error: document declares no TSS", file=sys.stderr)
            raise SystemExit(INPUT_ERROR)
        return doc.tss_decls[-1]
    try:
        return doc.tss(name)
    except KeyError as exc:
        print("error: %s" % exc, file=sys.stderr)
        raise SystemExit(INPUT_ERROR)


def _term(text: str, tss):
    try:
        return parse_term(text, tss)
    except ParseError as exc:
        print("term %r: %s" % (text, exc), file=sys.stderr)
        raise SystemExit(INPUT_ERROR)


# ---------------------------------------------------------------------------
# subcommands


def cmd_parse_check(args) -> int:
    doc = _load(args.file)
    _emit(doc.to_json(), args.json,
          ["parsed %d TSS declaration(s), %d equation(s)"
           % (len(doc.tss_decls), len(doc.equations))])
    return OK


def cmd_gsos_check(args) -> int:
    doc = _load(args.file)
    targets = [_pick_tss(doc, args.tss)] if args.tss else doc.tss_decls
    details = []
    for t in targets:
        report = analysis.validate_positive_gsos(t)
        for rule, why in report.violations:
            details.append({"tss": t.name, "rule": rule, "violation": why})
    verdict = "ok" if not details else "violations"
    _emit({"analysis": "gsos-check", "tss": [t.name for t in targets],
           "verdict": verdict, "details": details},
          args.json,
          ["%s" % verdict] + ["%s: rule %r: %s" % (d["tss"], d["rule"], d["violation"])
                              for d in details])
    return OK if not details else FAIL


def cmd_extension_check(args) -> int:
    doc = _load(args.file)
    base = _pick_tss(doc, args.base)
    ext = _pick_tss(doc, args.ext)
    try:
        report = analysis.validate_disjoint_extension(base, ext)
    except analysis.ArityConflictError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return INPUT_ERROR
    verdict = "disjoint" if report.disjoint else "not-disjoint"
    _emit({"analysis": "extension-check", "tss": [base.name, ext.name],
           "verdict": verdict, "details": list(report.offending)},
          args.json,
          [verdict] + ["rule %r defines a base operator" % r
                       for r in report.offending])
    return OK if report.disjoint else FAIL


def cmd_ruloids(args) -> int:
    doc = _load(args.spec)
    tss = _pick_tss(doc, args.tss)
    t = _term(args.term, tss)
    rs = ruloids(t, tss)
    payload = {
        "term": str(t),
        "ruloids": [
            {"hyps": [str(h) for h in r.hyps_sorted()],
             "label": r.label, "target": str(r.target)}
            for r in rs
        ],
    }
    _emit(payload, args.json, [str(r) for r in rs] or ["(no ruloids)"])
    return OK


def cmd_transitions(args) -> int:
    doc = _load(args.spec)
    tss = _pick_tss(doc, args.tss)
    t = _term(args.term, tss)
    try:
        ts = sorted(transitions(t, tss), key=lambda e: (e[0], str(e[1])))
    except ValueError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return INPUT_ERROR
    payload = {"term": str(t),
               "transitions": [{"label": l, "target": str(q)} for (l, q) in ts]}
    _emit(payload, args.json,
          ["%s -%s-> %s" % (t, l, q) for (l, q) in ts] or ["(no transitions)"])
    return OK


def cmd_explore(args) -> int:
    doc = _load(args.spec)
    tss = _pick_tss(doc, args.tss)
    t = _term(args.term, tss)
    bounds = _bounds_from(args)
    try:
        lts = explore(t, tss, bounds.state_cap)
    except ValueError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return INPUT_ERROR
    edges = sorted(lts.transitions, key=lambda e: (str(e[0]), e[1], str(e[2])))
    payload = {
        "root": str(t),
        "states": sorted(str(s) for s in lts.states),
        "transitions": [{"source": str(p), "label": l, "target": str(q)}
                        for (p, l, q) in edges],
        "complete": lts.complete,
    }
    _emit(payload, args.json,
          ["%d state(s), %d transition(s), %s"
           % (len(lts.states), len(edges),
              "complete" if lts.complete else "truncated")]
          + ["%s -%s-> %s" % (p, l, q) for (p, l, q) in edges])
    return OK if lts.complete else INCONCLUSIVE_AT_BOUND


def cmd_check(args) -> int:
    doc = _load(args.spec)
    tss = _pick_tss(doc, args.tss)
    lhs = _term(args.lhs, tss)
    rhs = _term(args.rhs, tss)
    bounds = _bounds_from(args)
    v = check(args.notion, lhs, rhs, tss, bounds)
    _emit(v.to_json(), args.json,
          ["%s: %s" % (v.kind, v.reason)] if v.reason else [v.kind])
    if v.holds:
        return OK
    if v.fails:
        return FAIL
    return INCONCLUSIVE_AT_BOUND


def cmd_fertility(args) -> int:
    doc = _load(args.spec)
    tss = _pick_tss(doc, args.tss)
    bounds = _bounds_from(args)
    try:
        result = analysis.initial_fertility(tss, bounds.term_size,
                                            force=args.force)
    except analysis.LabelGuardError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return INPUT_ERROR
    verdict = "fertile" if result.fertile else "unknown-at-bound"
    payload = {
        "analysis": "fertility", "tss": tss.name, "verdict": verdict,
        "bound": result.bound,
        "witnesses": [{"labels": list(ls), "term": str(p)}
                      for (ls, p) in result.witnesses],
        "missing": [list(m) for m in result.missing],
    }
    _emit(payload, args.json,
          [verdict]
          + ["{%s} realized by %s" % (", ".join(ls), p)
             for (ls, p) in result.witnesses]
          + ["{%s} unrealized at bound %d" % (", ".join(m), result.bound)
             for m in result.missing])
    return OK if result.fertile else INCONCLUSIVE_AT_BOUND


def cmd_non_evolving(args) -> int:
    doc = _load(args.spec)
    tss = _pick_tss(doc, args.tss)
    table = analysis.non_evolving_indices(tss)
    payload = {
        "analysis": "non-evolving", "tss": tss.name,
        "indices": {op: list(idxs) for op, idxs in table.indices},
    }
    _emit(payload, args.json,
          ["%s: %s" % (op, ", ".join(map(str, idxs)) if idxs else "(none)")
           for op, idxs in table.indices])
    return OK


def cmd_advise(args) -> int:
    text = Path(args.spec).read_text() if Path(args.spec).exists() else None
    if text is None:
        print("error: no such file %r" % args.spec, file=sys.stderr)
        return INPUT_ERROR
    if args.eqs:
        try:
            text += "\n" + Path(args.eqs).read_text()
        except OSError as exc:
            print("error: %s" % exc, file=sys.stderr)
            return INPUT_ERROR
    try:
        doc = parse(text)
    except (ParseError, SignatureError) as exc:
        print("%s: %s" % (args.spec, exc), file=sys.stderr)
        return INPUT_ERROR
    base = _pick_tss(doc, args.tss)
    ext = _pick_tss(doc, args.ext)
    axioms = tuple(e for e in doc.equations
                   if e.over in (base.name, ext.name))
    if not axioms:
        print("error: no equations pinned to %s or %s"
              % (base.name, ext.name), file=sys.stderr)
        return INPUT_ERROR
    theory = equations.EquationalTheory(axioms, base)
    bounds = _bounds_from(args)
    report = equations.preservation_advisor(theory, base, ext, args.notion,
                                            bounds)
    lines = []
    for a in report.axioms:
        lines.append("%s: %s%s" % (
            a.equation.name or str(a.equation), a.classification,
            " via %s" % a.theorem if a.theorem else ""))
    _emit(report.to_json(), args.json, lines)
    return FAIL if any(a.classification == equations.BROKEN
                       for a in report.axioms) else OK


# ---------------------------------------------------------------------------
# corpus runner


def _run_fixture(fx: dict, root: Path, bounds: Bounds) -> tuple[str, str]:
    """Returns (expected, actual) labels for one manifest entry."""
    doc = parse((root / fx["spec"]).read_text())
    fb = dict(
        (k, fx["bounds"][k]) for k in _BOUND_KEYS if k in fx.get("bounds", {})
    )
    if fb:
        merged = {k: getattr(bounds, k) for k in _BOUND_KEYS}
        merged.update(fb)
        bounds = Bounds(**merged)
    cmd = fx["command"]
    if cmd == "check":
        tss = doc.tss(fx["tss"])
        v = check(fx["notion"], parse_term(fx["lhs"], tss),
                  parse_term(fx["rhs"], tss), tss, bounds)
        return fx["expect"], v.kind
    if cmd == "gsos-check":
        report = analysis.validate_positive_gsos(doc.tss(fx["tss"]))
        return fx["expect"], "ok" if report.ok else "violations"
    if cmd == "extension-check":
        report = analysis.validate_disjoint_extension(
            doc.tss(fx["base"]), doc.tss(fx["ext"]))
        return fx["expect"], "disjoint" if report.disjoint else "not-disjoint"
    if cmd == "fertility":
        result = analysis.initial_fertility(doc.tss(fx["tss"]),
                                            bounds.term_size)
        return fx["expect"], "fertile" if result.fertile else "unknown-at-bound"
    if cmd == "robust-extension":
        eqs = tuple(doc.equations)
        crit = analysis.robust_extension_criteria(
            doc.tss(fx["base"]), doc.tss(fx["ext"]), eqs)
        return fx["expect"], "robust" if crit.robust else "not-robust"
    raise ValueError("unknown corpus command %r" % cmd)


def cmd_corpus(args) -> int:
    root = Path(args.dir)
    manifest_path = root / "manifest.json"
    if not manifest_path.exists():
        if not root.is_dir():
            print("error: no such directory %r" % args.dir, file=sys.stderr)
            return INPUT_ERROR
        _emit({"fixtures": [], "passed": 0, "failed": 0}, args.json,
              ["0 fixture(s)"])
        return OK
    manifest = json.loads(manifest_path.read_text())
    bounds = _bounds_from(args)
    rows = []
    for fx in sorted(manifest.get("fixtures", []), key=lambda f: f["name"]):
        try:
            expected, actual = _run_fixture(fx, root, bounds)
        except (ParseError, KeyError, OSError, ValueError) as exc:
            expected, actual = fx.get("expect", "?"), "error: %s" % exc
        rows.append({"name": fx["name"], "expect": expected,
                     "actual": actual, "pass": expected == actual})
    failed = [r for r in rows if not r["pass"]]
    _emit({"fixtures": rows, "passed": len(rows) - len(failed),
           "failed": len(failed)},
          args.json,
          ["%-40s %-12s %-12s %s" % (r["name"], r["expect"], r["actual"],
                                     "ok" if r["pass"] else "DIVERGED")
           for r in rows]
          + ["%d passed, %d failed" % (len(rows) - len(failed), len(failed))])
    return OK if not failed else FAIL


# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="opensos",
        description="Rule-format analyses and open-term bisimilarity checks "
                    "for transition system specifications.")
    subs = ap.add_subparsers(dest="command", required=True)

    def sub(name, fn, **kw):
        p = subs.add_parser(name, **kw)
        p.add_argument("--json", action="store_true")
        p.set_defaults(fn=fn)
        return p

    p = sub("parse-check", cmd_parse_check, help="parse a specification file")
    p.add_argument("file")

    p = sub("gsos-check", cmd_gsos_check, help="validate the rule format")
    p.add_argument("file")
    p.add_argument("--tss")

    p = sub("extension-check", cmd_extension_check,
            help="validate a disjoint extension")
    p.add_argument("file")
    p.add_argument("--base", required=True)
    p.add_argument("--ext", required=True)

    p = sub("ruloids", cmd_ruloids, help="derive the ruloids of an open term")
    p.add_argument("term")
    p.add_argument("--spec", required=True)
    p.add_argument("--tss")

    p = sub("transitions", cmd_transitions,
            help="derive the transitions of a closed term")
    p.add_argument("term")
    p.add_argument("--spec", required=True)
    p.add_argument("--tss")

    p = sub("explore", cmd_explore, help="explore the reachable state space")
    p.add_argument("term")
    p.add_argument("--spec", required=True)
    p.add_argument("--tss")
    _add_bounds_flags(p)

    p = sub("check", cmd_check, help="check an equivalence between two terms")
    p.add_argument("notion", choices=NOTIONS)
    p.add_argument("lhs")
    p.add_argument("rhs")
    p.add_argument("--spec", required=True)
    p.add_argument("--tss")
    _add_bounds_flags(p)

    p = sub("fertility", cmd_fertility,
            help="search for initial-action witnesses per label subset")
    p.add_argument("--spec", required=True)
    p.add_argument("--tss")
    p.add_argument("--force", action="store_true",
                   help="override the label-count guard")
    _add_bounds_flags(p)

    p = sub("non-evolving", cmd_non_evolving,
            help="non-evolving argument indices per operator")
    p.add_argument("--spec", required=True)
    p.add_argument("--tss")

    p = sub("advise", cmd_advise,
            help="preservation report for equations under an extension")
    p.add_argument("--spec", required=True)
    p.add_argument("--tss", required=True, help="base TSS name")
    p.add_argument("--ext", required=True, help="extension TSS name")
    p.add_argument("--eqs", help="extra file of equation declarations")
    p.add_argument("--notion", default="ci", choices=("ci", "fh", "hp",
                                                      "pfh", "php"))
    _add_bounds_flags(p)

    p = sub("corpus", cmd_corpus, help="run a fixture corpus against its manifest")
    p.add_argument("dir")
    _add_bounds_flags(p)

    return ap


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else INPUT_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
