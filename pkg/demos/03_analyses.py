"""Syntactic analyses: format validation, extension checks, label usage,
non-evolving indices, and initial fertility.

Run from the repository root:  python3 demos/03_analyses.py
"""
from pathlib import Path

from opensos import (
    initial_fertility,
    label_usage,
    non_evolving_indices,
    parse,
    robust_extension_criteria,
    validate_disjoint_extension,
    validate_positive_gsos,
)

CORPUS = Path(__file__).parent.parent / "corpus"

doc = parse((CORPUS / "ex1.sos").read_text())
ccs, ext = doc.tss("Ccs"), doc.tss("CcsExt")

report = validate_positive_gsos(ccs)
print("Ccs in positive GSOS format:", report.ok)

ereport = validate_disjoint_extension(ccs, ext)
print("CcsExt is a disjoint extension:", ereport.disjoint)

prem, concl = label_usage(ext)
print("extension premise labels:", sorted(prem),
      "| conclusion labels:", sorted(concl))

table = non_evolving_indices(ccs)
print("non-evolving argument indices:",
      {op: sorted(ix) for op, ix in table.indices})

# every label set should be realizable as the initial actions of some closed
# term; the empty set needs an inert term, which this system has (zero)
result = initial_fertility(ccs, 3)
print("Ccs initially fertile at size 3:", result.fertile)

# a perpetually running system never realizes the empty set
rep = parse((CORPUS / "ex6.sos").read_text()).tss("Rep")
result = initial_fertility(rep, 5)
print("Rep fertile at size 5:", result.fertile,
      "| unrealized:", [sorted(m) for m in result.missing])

# the label criteria that guarantee equation preservation for ci
b = parse((CORPUS / "sec43b.sos").read_text())
crit = robust_extension_criteria(b.tss("Res"), b.tss("Par"), tuple(b.equations))
print("restriction equations robust under the parallel extension:", crit.robust)
