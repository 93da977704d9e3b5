"""Check open-term bisimilarities and inspect certificates and witnesses.

Run from the repository root:  python3 demos/02_bisimilarity.py
"""
import json
from pathlib import Path

from opensos import Var, check, fh_bisim, hp_bisim, parse, parse_term, pfh_bisim

CORPUS = Path(__file__).parent.parent / "corpus"

# associativity of choice holds up-to-fh; the certificate is the closed
# relation the game discovered
doc = parse((CORPUS / "ex1.sos").read_text())
ccs = doc.tss("Ccs")
v = fh_bisim(parse_term("plus(x, plus(y, z))", ccs),
             parse_term("plus(plus(x, y), z)", ccs), ccs)
print("assoc up-to-fh:", v.kind)
print(json.dumps(v.certificate, indent=2))

# the forwarding operator is fh-bisimilar to its argument -- but only until a
# disjoint extension introduces a second label
doc3 = parse((CORPUS / "ex3.sos").read_text())
f, fb = doc3.tss("F"), doc3.tss("FB")
s, t = parse_term("f(x)", f), Var("x")
print()
print("f(x) ~fh x on the base:", fh_bisim(s, t, f).kind)
v = fh_bisim(s, t, fb)
print("f(x) ~fh x after adding label b:", v.kind)
print("  failing obligation:", v.witness["trace"][-1]["obligation"]["ruloid"])

# the proper variant refuses the improper root pair outright, which is what
# buys robustness under every disjoint extension
v = pfh_bisim(s, t, f)
print("f(x) ~pfh x on the base:", v.kind,
      "(improper pair %s)" % v.witness["trace"][-1]["obligation"]["improper"])

# copying choice needs hypothesis-preserving relations: the derivative
# plus(x', x') and x' are related under a remembered hypothesis
doc4 = parse((CORPUS / "ex4.sos").read_text())
copy = doc4.tss("Copy")
v = hp_bisim(parse_term("plus(x, y)", copy), parse_term("plus(y, x)", copy), copy)
print()
print("copying plus commutative up-to-hp:", v.kind)
for state in v.certificate["states"]:
    print("  pair %-28s gamma %s" % (state["pair"], state["gamma"]))

# the generic entry point dispatches on the notion name
print()
print("dispatch:", check("ci", parse_term("plus(x, x)", ccs), Var("x"), ccs).kind)
