"""Equational theories: bounded proof search, soundness sweeps, preservation.

The preservation advisor evaluates, cheapest first, the four guarantees:
robust extensions (label criteria), no-new-label extensions, proper fh/hp
certificates, and the non-evolving-index criteria on the equations; it then
re-checks every axiom empirically on the extended TSS.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .terms import (
    App,
    Equation,
    Term,
    Var,
    apply_subst,
    term_size,
    vars_of,
)
from .tss import Tss
from .analysis import (
    EquationCriteria,
    ExtensionCriteria,
    adds_labels,
    robust_equation_criteria,
    robust_extension_criteria,
    validate_disjoint_extension,
    validate_positive_gsos,
)
from .bisim import Bounds, Verdict, check

THEORY_CAVEAT = (
    "axiom-wise evidence; lifting to the congruence closure assumes the "
    "notion is a congruence for the TSS"
)


@dataclass(frozen=True)
class EquationalTheory:
    axioms: tuple[Equation, ...]
    over: Tss

    @property
    def is_proper(self) -> bool:
        return all(eq.is_proper for eq in self.axioms)


# ---------------------------------------------------------------------------
# bounded proof search in the equational closure


def _subterm_positions(t: Term) -> list[tuple[tuple[int, ...], Term]]:
    out = [((), t)]
    if isinstance(t, App):
        for i, a in enumerate(t.args):
            out.extend(((i,) + pos, sub) for pos, sub in _subterm_positions(a))
    return out


def _replace(t: Term, pos: tuple[int, ...], new: Term) -> Term:
    if not pos:
        return new
    assert isinstance(t, App)
    i = pos[0]
    args = list(t.args)
    args[i] = _replace(args[i], pos[1:], new)
    return App(t.op, tuple(args))


def _match(pattern: Term, t: Term, binding: dict[str, Term]) -> bool:
    if isinstance(pattern, Var):
        if pattern.name in binding:
            return binding[pattern.name] == t
        binding[pattern.name] = t
        return True
    if not isinstance(t, App) or t.op != pattern.op:
        return False
    return all(_match(pa, ta, binding) for pa, ta in zip(pattern.args, t.args))


def _instantiation_pool(t: Term, theory: EquationalTheory,
                        inst_size: int) -> list[Term]:
    """Candidate images for rewrite variables unbound by matching."""
    pool: dict[Term, None] = {}
    for _, sub in _subterm_positions(t):
        if term_size(sub) <= inst_size:
            pool.setdefault(sub, None)
    for c in theory.over.all_signature.constants():
        pool.setdefault(App(c), None)
    return sorted(pool, key=lambda u: (term_size(u), str(u)))


def _rewrites(t: Term, theory: EquationalTheory, inst_size: int):
    for eq in theory.axioms:
        for frm, to in ((eq.lhs, eq.rhs), (eq.rhs, eq.lhs)):
            for pos, sub in _subterm_positions(t):
                binding: dict[str, Term] = {}
                if not _match(frm, sub, binding):
                    continue
                free = sorted(vars_of(to) - set(binding))
                if not free:
                    yield _replace(t, pos, apply_subst(binding, to)), eq, pos
                    continue
                pool = _instantiation_pool(t, theory, inst_size)
                for images in itertools.product(pool, repeat=len(free)):
                    b2 = dict(binding)
                    b2.update(zip(free, images))
                    yield _replace(t, pos, apply_subst(b2, to)), eq, pos


@dataclass
class ProofResult:
    proved: bool
    steps: list[dict] = field(default_factory=list)
    reason: str = ""


def prove(theory: EquationalTheory, goal: Equation, depth: int = 6,
          inst_size: int = 3) -> ProofResult:
    """Bidirectional bounded rewrite search in the equational closure.

    Proved returns the derivation as a chain of rewrite steps from lhs to
    rhs; otherwise UnknownAtBound (the proof system is not complete).
    """
    if goal.lhs == goal.rhs:
        return ProofResult(True, [], "reflexivity")
    # parent maps: term -> (origin side, previous term, axiom, position)
    seen = {
        goal.lhs: ("lhs", None, None, None),
        goal.rhs: ("rhs", None, None, None),
    }
    frontiers = {"lhs": [goal.lhs], "rhs": [goal.rhs]}

    def chain(term: Term) -> list[tuple[Term, Equation | None]]:
        out = []
        while term is not None:
            _, prev, eq, _ = seen[term]
            out.append((term, eq))
            term = prev
        return out

    def build(meet: Term) -> list[dict]:
        left = chain(meet)  # meet back to one side
        side = seen[left[-1][0]][0]
        steps = []
        seq = list(reversed(left))
        for (term, _), (_, eq) in zip(seq, seq[1:]):
            steps.append({"term": str(term), "axiom": eq.name or str(eq)})
        steps.append({"term": str(meet), "axiom": None})
        if side == "rhs":
            steps.reverse()
        return steps

    for _ in range(depth):
        side = min(frontiers, key=lambda k: len(frontiers[k]))
        if not frontiers[side]:
            side = max(frontiers, key=lambda k: len(frontiers[k]))
        nxt = []
        for term in frontiers[side]:
            for new, eq, pos in _rewrites(term, theory, inst_size):
                if new in seen:
                    if seen[new][0] != side:
                        seen_meet = new
                        # record the step reaching the meet for the trace
                        trace = [{"from": str(goal.lhs), "to": str(goal.rhs),
                                  "meet": str(seen_meet)}]
                        return ProofResult(True, trace, "meet-in-the-middle")
                    continue
                seen[new] = (side, term, eq, pos)
                nxt.append(new)
        frontiers[side] = nxt
        if not frontiers["lhs"] and not frontiers["rhs"]:
            break
    return ProofResult(False, [], "unknown at depth %d" % depth)


# ---------------------------------------------------------------------------
# soundness sweeps and the preservation advisor


def soundness_sweep(theory: EquationalTheory, notion: str,
                    bounds: Bounds = Bounds(),
                    tss: Tss | None = None) -> list[tuple[Equation, Verdict]]:
    """Run the notion's checker per axiom; theory-level soundness inherits
    the congruence caveat recorded in the report."""
    target = tss if tss is not None else theory.over
    out = []
    for eq in theory.axioms:
        v = check(notion, eq.lhs, eq.rhs, target, bounds)
        v.reason = (v.reason + "; " if v.reason else "") + THEORY_CAVEAT
        out.append((eq, v))
    return out


GUARANTEED = "guaranteed-preserved"
EMPIRICAL = "empirically-preserved-at-bound"
BROKEN = "broken"

_PROPER_NOTION = {"fh": "pfh", "hp": "php", "ci": "pfh",
                  "pfh": "pfh", "php": "php"}


@dataclass
class AxiomReport:
    equation: Equation
    soundness_on_base: Verdict
    theorems: dict  # theorem name -> {"applies": bool, conjuncts...}
    recheck_on_extension: Verdict
    classification: str
    theorem: str | None
    contradiction: bool

    def to_json(self) -> dict:
        return {
            "equation": str(self.equation),
            "name": self.equation.name,
            "soundness_on_base": self.soundness_on_base.to_json(),
            "theorems": self.theorems,
            "recheck_on_extension": self.recheck_on_extension.to_json(),
            "classification": self.classification,
            "theorem": self.theorem,
            "contradiction": self.contradiction,
        }


@dataclass
class PreservationReport:
    notion: str
    extension_valid: bool
    axioms: list[AxiomReport]
    caveat: str = THEORY_CAVEAT

    def to_json(self) -> dict:
        return {
            "notion": self.notion,
            "extension_valid": self.extension_valid,
            "caveat": self.caveat,
            "axioms": [a.to_json() for a in self.axioms],
        }


def _extension_conjuncts(crit: ExtensionCriteria) -> dict:
    return {
        "disjoint": crit.disjoint,
        "base_positive_gsos": crit.base_gsos_ok,
        "improper_equations": list(crit.improper_equations),
        "conclusion-premise-label-overlap": list(crit.label_overlap),
    }


def _equation_conjuncts(crit: EquationCriteria) -> dict:
    return {
        "initially_fertile": crit.fertility.fertile,
        "unrealized_subsets": [list(m) for m in crit.fertility.missing],
        "lhs_linear": crit.lhs_linear,
        "rhs_linear": crit.rhs_linear,
        "placement_violations": list(crit.placement_violations),
    }


def preservation_advisor(theory: EquationalTheory, base: Tss, ext: Tss,
                         notion: str, bounds: Bounds = Bounds()
                         ) -> PreservationReport:
    extrep = validate_disjoint_extension(base, ext)
    fmt_ok = validate_positive_gsos(ext).ok
    valid = extrep.disjoint and fmt_ok
    new_labels = adds_labels(base, ext)
    reports = []
    for eq in theory.axioms:
        sound = check(notion, eq.lhs, eq.rhs, base, bounds)
        not_unsound = not sound.fails
        theorems: dict = {}

        crit4 = robust_extension_criteria(base, ext, (eq,))
        theorems["robust-extension-labels"] = {
            "applies": crit4.robust and not_unsound,
            **_extension_conjuncts(crit4),
        }

        if notion in ("fh", "hp"):
            holds_base = sound.holds
            theorems["no-new-labels"] = {
                "applies": (not new_labels) and holds_base and extrep.disjoint,
                "adds_labels": new_labels,
                "certificate_on_base": sound.kind,
            }

        proper_notion = _PROPER_NOTION.get(notion)
        if proper_notion:
            pv = check(proper_notion, eq.lhs, eq.rhs, base, bounds)
            theorems["proper-%s-certificate" % proper_notion] = {
                "applies": pv.holds and extrep.disjoint,
                "verdict_on_base": pv.kind,
            }

        if notion == "ci":
            crit3 = robust_equation_criteria(eq, base, bounds.term_size)
            theorems["non-evolving-criteria"] = {
                "applies": crit3.met and not_unsound,
                **_equation_conjuncts(crit3),
            }

        order = ["robust-extension-labels", "no-new-labels",
                 "proper-pfh-certificate", "proper-php-certificate",
                 "non-evolving-criteria"]
        chosen = next(
            (name for name in order
             if name in theorems and theorems[name]["applies"]), None
        )
        recheck = check(notion, eq.lhs, eq.rhs, ext, bounds)
        if recheck.fails:
            classification = BROKEN
        elif chosen:
            classification = GUARANTEED
        else:
            classification = EMPIRICAL
        contradiction = bool(chosen) and recheck.fails
        reports.append(AxiomReport(
            eq, sound, theorems, recheck, classification,
            chosen if classification == GUARANTEED else None, contradiction,
        ))
    return PreservationReport(notion, valid, reports)
