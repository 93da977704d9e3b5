"""Static analyses over a TSS: rule format, extensions, fertility, robustness."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .terms import (
    App,
    Equation,
    Signature,
    Term,
    Var,
    enumerate_closed_terms,
    is_linear,
    vars_of,
)
from .tss import FormatViolation, Rule, Tss, destructure_rule, rule_head
from .ruloids import initial_actions, transitions


@dataclass(frozen=True)
class FormatReport:
    violations: tuple[tuple[str, str], ...]  # (rule name, explanation)

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_positive_gsos(tss: Tss) -> FormatReport:
    violations = []
    for rule in tss.all_rules:
        try:
            destructure_rule(rule)
        except FormatViolation as exc:
            violations.append((rule.name, str(exc)))
    return FormatReport(tuple(violations))


class ArityConflictError(ValueError):
    pass


@dataclass(frozen=True)
class ExtensionReport:
    offending: tuple[str, ...]  # delta rules defining an old operator

    @property
    def disjoint(self) -> bool:
        return not self.offending


def validate_disjoint_extension(base: Tss, ext: Tss) -> ExtensionReport:
    """Check that every delta rule is f-defining for a new operator.

    `ext` is the extension layer; only its own (non-base) declarations count
    as the delta.  An arity conflict between layers is a hard error.
    """
    base_sig = base.all_signature
    try:
        base_sig.merge(ext.signature)
    except Exception as exc:
        raise ArityConflictError(str(exc)) from exc
    new_ops = set(ext.signature.names()) - set(base_sig.names())
    bad = []
    for rule in ext.rules:
        head = rule_head(rule)
        if head is None or head not in new_ops:
            bad.append(rule.name)
    return ExtensionReport(tuple(bad))


def label_usage(tss: Tss) -> tuple[frozenset[str], frozenset[str]]:
    """(premise labels, conclusion labels) of the TSS's own rules."""
    prem: set[str] = set()
    concl: set[str] = set()
    for rule in tss.rules:
        concl.add(rule.conclusion.label)
        for p in rule.premises:
            prem.add(p.label)
    return frozenset(prem), frozenset(concl)


def adds_labels(base: Tss, ext: Tss) -> bool:
    return bool(set(ext.labels) - set(base.all_labels))


@dataclass(frozen=True)
class NonEvolvingTable:
    indices: tuple[tuple[str, tuple[int, ...]], ...]  # per operator

    def of(self, op: str) -> frozenset[int]:
        for name, idxs in self.indices:
            if name == op:
                return frozenset(idxs)
        raise KeyError(op)


def non_evolving_indices(tss: Tss) -> NonEvolvingTable:
    """Per operator, the indices non-evolving for every defining rule.

    An index is non-evolving for a rule when neither the argument variable
    nor any of its premise targets occurs in the conclusion target.
    Operators with no defining rules get every index (vacuous intersection).
    """
    table = []
    for op, arity in sorted(tss.all_signature.operators):
        good = set(range(arity))
        for rule in tss.defining_rules(op):
            shape = tss.shape(rule)
            tvars = vars_of(shape.target)
            for i in list(good):
                if shape.source_vars[i] in tvars:
                    good.discard(i)
                    continue
                for (idx, _, ptarget) in shape.premises:
                    if idx == i and ptarget in tvars:
                        good.discard(i)
                        break
        table.append((op, tuple(sorted(good))))
    return NonEvolvingTable(tuple(table))


class LabelGuardError(ValueError):
    pass


@dataclass(frozen=True)
class FertilityResult:
    witnesses: tuple[tuple[tuple[str, ...], Term], ...]  # realized subsets
    missing: tuple[tuple[str, ...], ...]
    bound: int

    @property
    def fertile(self) -> bool:
        return not self.missing


def initial_fertility(tss: Tss, size_bound: int, *,
                      max_labels: int = 16, force: bool = False) -> FertilityResult:
    """Search closed terms of bounded size for one witness per label subset.

    A semi-decision: either Fertile with verified witnesses, or the subsets
    still unrealized at the bound.  Never answers "infertile".
    """
    labels = tss.all_labels
    if len(labels) > max_labels and not force:
        raise LabelGuardError(
            "%d labels means %d subsets; pass force to override"
            % (len(labels), 2 ** len(labels))
        )
    wanted = {
        frozenset(c)
        for n in range(len(labels) + 1)
        for c in itertools.combinations(labels, n)
    }
    witnesses: dict[frozenset[str], Term] = {}
    for p in enumerate_closed_terms(tss.all_signature, size_bound):
        acts = frozenset(initial_actions(p, tss))
        if acts in wanted and acts not in witnesses:
            witnesses[acts] = p
            if len(witnesses) == len(wanted):
                break
    missing = sorted(wanted - set(witnesses), key=lambda s: (len(s), sorted(s)))
    return FertilityResult(
        tuple(sorted(((tuple(sorted(k)), v) for k, v in witnesses.items()),
                     key=lambda e: (len(e[0]), e[0]))),
        tuple(tuple(sorted(m)) for m in missing),
        size_bound,
    )


def _open_argument_placement(t: Term, table: NonEvolvingTable
                             ) -> list[str]:
    """Violations of "open arguments sit at non-evolving indices"."""
    out: list[str] = []

    def walk(u: Term) -> None:
        if isinstance(u, Var):
            return
        for i, a in enumerate(u.args):
            if vars_of(a) and i not in table.of(u.op):
                out.append(
                    "open argument %s at evolving index %d of %s" % (a, i, u.op)
                )
            walk(a)

    walk(t)
    return out


@dataclass(frozen=True)
class EquationCriteria:
    fertility: FertilityResult
    lhs_linear: bool
    rhs_linear: bool
    placement_violations: tuple[str, ...]
    notes: tuple[str, ...] = ()

    @property
    def met(self) -> bool:
        return (self.fertility.fertile and self.lhs_linear and self.rhs_linear
                and not self.placement_violations)


def robust_equation_criteria(eq: Equation, tss: Tss, size_bound: int, *,
                             force: bool = False) -> EquationCriteria:
    """Side conditions under which a sound equation survives any disjoint
    positive GSOS extension: fertility, linearity, and non-evolving placement.

    Soundness of the equation itself is established separately.
    """
    fert = initial_fertility(tss, size_bound, force=force)
    table = non_evolving_indices(tss)
    violations: list[str] = []
    for side, t in (("lhs", eq.lhs), ("rhs", eq.rhs)):
        if isinstance(t, Var):
            violations.append("%s is a bare variable" % side)
        else:
            violations.extend("%s: %s" % (side, v)
                              for v in _open_argument_placement(t, table))
    notes = (
        "closed argument terms at evolving indices are permitted; only open "
        "arguments are constrained",
    )
    return EquationCriteria(
        fert, is_linear(eq.lhs), is_linear(eq.rhs), tuple(violations), notes
    )


@dataclass(frozen=True)
class ExtensionCriteria:
    disjoint: bool
    offending_rules: tuple[str, ...]
    base_gsos_ok: bool
    improper_equations: tuple[str, ...]
    label_overlap: tuple[str, ...]

    @property
    def robust(self) -> bool:
        return (self.disjoint and self.base_gsos_ok
                and not self.improper_equations and not self.label_overlap)


def robust_extension_criteria(base: Tss, ext: Tss,
                              equations: tuple[Equation, ...]
                              ) -> ExtensionCriteria:
    """Syntactic criteria under which any sound proper theory stays sound:
    disjointness plus no delta conclusion label in the base's premises."""
    extrep = validate_disjoint_extension(base, ext)
    fmt = validate_positive_gsos(base)
    improper = tuple(
        eq.name or str(eq) for eq in equations if not eq.is_proper
    )
    base_prem = set()
    for layer in base.layers():
        base_prem |= label_usage(layer)[0]
    _, ext_concl = label_usage(ext)
    overlap = tuple(sorted(ext_concl & base_prem))
    return ExtensionCriteria(
        extrep.disjoint, extrep.offending, fmt.ok, improper, overlap
    )


def conservativity_probe(base: Tss, ext: Tss, size_bound: int
                         ) -> tuple[tuple[Term, str], ...]:
    """Closed base terms whose transition sets differ between the layers.

    Empty for every validated disjoint positive GSOS extension.
    """
    bad: list[tuple[Term, str]] = []
    for p in enumerate_closed_terms(base.all_signature, size_bound):
        old = transitions(p, base)
        new = transitions(p, ext)
        if old != new:
            bad.append((p, "transitions differ: %s vs %s"
                        % (sorted(map(str, old)), sorted(map(str, new)))))
    return tuple(bad)
