"""Parse a specification, synthesize ruloids, and derive transitions.

Run from the repository root:  python3 demos/01_parse_and_derive.py
"""
from pathlib import Path

from opensos import (
    App,
    explore,
    parse,
    parse_term,
    print_document,
    ruloids,
    transitions,
)

doc = parse((Path(__file__).parent.parent / "corpus" / "ex1.sos").read_text())
ccs = doc.tss("Ccs")

print("=== canonical layout ===")
print(print_document(doc))

print("=== most-general ruloids for plus(x, y) ===")
for r in ruloids(parse_term("plus(x, y)", ccs), ccs):
    print(" ", r)

print()
print("=== and for an open nested term ===")
for r in ruloids(parse_term("plus(x, plus(y, z))", ccs), ccs):
    print(" ", r)

print()
print("=== transitions of closed terms ===")
for text in ("zero", "pre_a(zero)", "plus(zero, pre_a(zero))"):
    p = parse_term(text, ccs)
    moves = sorted(transitions(p, ccs), key=lambda e: (e[0], str(e[1])))
    print("  %-25s %s" % (p, ["-%s-> %s" % (l, q) for l, q in moves] or "(inert)"))

print()
print("=== reachable state space ===")
lts = explore(parse_term("plus(pre_a(zero), pre_a(pre_a(zero)))", ccs), ccs)
print("  %d states, %d transitions, complete=%s"
      % (len(lts.states), len(lts.transitions), lts.complete))
