"""Equational reasoning: bounded proof search, soundness sweeps, and the
preservation advisor.

Run from the repository root:  python3 demos/04_equations_and_advice.py
"""
import json
from pathlib import Path

from opensos import (
    Bounds,
    Equation,
    EquationalTheory,
    parse,
    parse_term,
    preservation_advisor,
    prove,
    soundness_sweep,
)

CORPUS = Path(__file__).parent.parent / "corpus"

doc = parse((CORPUS / "ex1.sos").read_text())
ccs, ext = doc.tss("Ccs"), doc.tss("CcsExt")
theory = EquationalTheory(tuple(doc.equations), ccs)

goal = Equation(parse_term("plus(plus(w, x), plus(y, z))", ccs),
                parse_term("plus(z, plus(y, plus(x, w)))", ccs))
result = prove(theory, goal, depth=4)
print("reassociate-and-commute goal provable:", result.proved,
      "(%d steps)" % len(result.steps))

print()
print("soundness sweep on the base system:")
for eq, v in soundness_sweep(theory, "ci", Bounds(term_size=3)):
    print("  %-6s %s" % (eq.name, v.kind))

print()
print("the same axioms after the disjoint extension adds live constants:")
for eq, v in soundness_sweep(theory, "ci", Bounds(term_size=2), tss=ext):
    line = "  %-6s %s" % (eq.name, v.kind)
    if v.fails:
        line += "  (sigma %s)" % v.witness["sigma"]
    print(line)

print()
print("preservation advice, axiom by axiom:")
report = preservation_advisor(theory, ccs, ext, "ci",
                              Bounds(term_size=2, depth=8,
                                     state_cap=200, pair_cap=500))
for axiom in report.axioms:
    print("  %-6s %-32s via %s" % (axiom.equation.name, axiom.classification,
                                   axiom.theorem or "bounded re-check only"))

print()
print("full JSON report for one axiom:")
print(json.dumps(report.to_json()["axioms"][0], indent=2, sort_keys=True))
