"""Derivation of most-general provable ruloids, and closed-term transitions.

The two routes are deliberately independent: `ruloids` synthesises open-term
inference rules by structural recursion, while `transitions` derives closed
transitions directly from the deduction rules.  Tests cross-check them.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .terms import (
    App,
    Subst,
    Term,
    Var,
    apply_subst,
    canonical_names,
    is_closed,
    term_size,
    var_occurrences,
    vars_of,
)
from .tss import Tss


@dataclass(frozen=True)
class Hyp:
    """A hypothesis: a variable-to-variable labelled transition."""

    source: str
    label: str
    target: str

    def __str__(self) -> str:
        return "%s -%s-> %s" % (self.source, self.label, self.target)


@dataclass(frozen=True)
class Ruloid:
    hyps: frozenset[Hyp]
    source: Term
    label: str
    target: Term

    def hyps_sorted(self) -> tuple[Hyp, ...]:
        return tuple(sorted(self.hyps, key=lambda h: (h.target, h.source, h.label)))

    def __str__(self) -> str:
        prem = ", ".join(str(h) for h in self.hyps_sorted())
        return "%s|- %s -%s-> %s" % (
            prem + " " if prem else "", self.source, self.label, self.target
        )


def _canonicalize(source: Term, label: str, target: Term,
                  hyps: list[tuple[Hyp, int]]) -> Ruloid:
    """Rename hypothesis targets to h0, h1, ... in canonical order.

    Order: source variable's first occurrence in the conclusion source,
    then label name, then discovery order (stable tiebreak).
    """
    occ = {}
    for i, name in enumerate(var_occurrences(source)):
        occ.setdefault(name, i)
    ordered = sorted(hyps, key=lambda hs: (occ.get(hs[0].source, 1 << 30),
                                           hs[0].label, hs[1]))
    avoid = vars_of(source)
    names = canonical_names(len(ordered), avoid, prefix="h")
    ren = {hs[0].target: fresh for hs, fresh in zip(ordered, names)}
    new_hyps = frozenset(
        Hyp(h.source, h.label, ren[h.target]) for h, _ in ordered
    )
    new_target = apply_subst({old: Var(new) for old, new in ren.items()}, target)
    return Ruloid(new_hyps, source, label, new_target)


def _synthesize(t: Term, tss: Tss) -> tuple[Ruloid, ...]:
    if isinstance(t, Var):
        out = []
        for seq, label in enumerate(tss.all_labels):
            h = Hyp(t.name, label, "h0")
            out.append(Ruloid(frozenset([h]), t, label, Var("h0")))
        return tuple(out)

    counter = itertools.count()

    def fresh() -> str:
        return "?%d" % next(counter)

    sub_ruloids = [ruloids(a, tss) for a in t.args]
    results: list[Ruloid] = []
    for rule in tss.defining_rules(t.op):
        shape = tss.shape(rule)
        base_binding: dict[str, Term] = {
            x: arg for x, arg in zip(shape.source_vars, t.args)
        }
        # per premise: the candidate sub-ruloids of the bound argument term
        choice_lists = []
        for (idx, plabel, ptarget) in shape.premises:
            candidates = [r for r in sub_ruloids[idx] if r.label == plabel]
            choice_lists.append((ptarget, candidates))
        for combo in itertools.product(*(cs for _, cs in choice_lists)):
            binding = dict(base_binding)
            hyps: list[tuple[Hyp, int]] = []
            seq = 0
            for (ptarget, _), chosen in zip(choice_lists, combo):
                # freshen the chosen sub-ruloid's hypothesis targets so that
                # hypotheses from different premises stay pairwise distinct
                ren = {h.target: fresh() for h in chosen.hyps_sorted()}
                for h in chosen.hyps_sorted():
                    hyps.append((Hyp(h.source, h.label, ren[h.target]), seq))
                    seq += 1
                sub_target = apply_subst(
                    {old: Var(new) for old, new in ren.items()}, chosen.target
                )
                binding[ptarget] = sub_target
            target = apply_subst(binding, shape.target)
            results.append(_canonicalize(t, shape.label, target, hyps))
    # deterministic order, duplicates removed; targets beyond the state size
    # cap are never printed (their relative order is irrelevant: every
    # consumer prunes them)
    uniq: dict[Ruloid, None] = {}
    for r in results:
        uniq.setdefault(r, None)

    def ruloid_key(r: Ruloid):
        s = term_size(r.target)
        return (r.label, s, str(r.target) if s <= STATE_SIZE_CAP else "",
                tuple(str(h) for h in r.hyps_sorted()))

    return tuple(sorted(uniq, key=ruloid_key))


def ruloids(t: Term, tss: Tss) -> tuple[Ruloid, ...]:
    """The most-general provable ruloids with conclusion source t."""
    cache = tss._memo.setdefault("ruloids", {})
    if t not in cache:
        cache[t] = _synthesize(t, tss)
    return cache[t]


def transitions(p: Term, tss: Tss) -> frozenset[tuple[str, Term]]:
    """All derivable transitions of a closed term, computed directly."""
    if not is_closed(p):
        raise ValueError("transitions requires a closed term, got %s" % p)
    cache = tss._memo.setdefault("transitions", {})
    if p in cache:
        return cache[p]
    assert isinstance(p, App)
    result: set[tuple[str, Term]] = set()
    for rule in tss.defining_rules(p.op):
        shape = tss.shape(rule)
        binding: dict[str, Term] = {
            x: arg for x, arg in zip(shape.source_vars, p.args)
        }
        choice_lists = []
        for (idx, plabel, ptarget) in shape.premises:
            succ = [q for (l, q) in transitions(p.args[idx], tss)
                    if l == plabel]
            choice_lists.append((ptarget, succ))
        for combo in itertools.product(*(cs for _, cs in choice_lists)):
            env = dict(binding)
            for (ptarget, _), q in zip(choice_lists, combo):
                env[ptarget] = q
            result.add((shape.label, apply_subst(env, shape.target)))
    cache[p] = frozenset(result)
    return cache[p]


def initial_actions(p: Term, tss: Tss) -> frozenset[str]:
    return frozenset(l for (l, _) in transitions(p, tss))


@dataclass(frozen=True)
class Lts:
    states: frozenset[Term]
    transitions: frozenset[tuple[Term, str, Term]]
    complete: bool


STATE_SIZE_CAP = 1000  # derivatives can outgrow any state cap on copying rules
STATE_DEPTH_CAP = 120  # keeps recursive traversals well inside stack limits


def succ_key(e: tuple[str, Term]):
    """Deterministic sort key for (label, target) pairs that never prints
    oversized terms; ties among terms beyond the size cap don't matter
    because those terms are pruned from every search."""
    l, t = e
    s = term_size(t)
    return (l, s, str(t) if s <= STATE_SIZE_CAP else "")


def explore(p: Term, tss: Tss, state_cap: int = 10_000) -> Lts:
    """Breadth-first reachable LTS from p; complete unless a cap bites."""
    seen: set[Term] = {p}
    frontier = [p]
    edges: set[tuple[Term, str, Term]] = set()
    complete = True
    while frontier:
        nxt: list[Term] = []
        for q in frontier:
            for (l, q2) in sorted(transitions(q, tss), key=succ_key):
                edges.add((q, l, q2))
                if q2 not in seen:
                    if (len(seen) >= state_cap
                            or term_size(q2) > STATE_SIZE_CAP
                            or (isinstance(q2, App)
                                and q2.depth > STATE_DEPTH_CAP)):
                        complete = False
                        continue
                    seen.add(q2)
                    nxt.append(q2)
        frontier = nxt
    return Lts(frozenset(seen), frozenset(edges), complete)


def instantiations(r: Ruloid, sigma: Subst, tss: Tss
                   ) -> tuple[tuple[str, Term], ...]:
    """All closed conclusion instances of r under a closing substitution.

    Each hypothesis x -l-> h is discharged by any derivable transition of
    sigma(x) with label l; the targets extend sigma over the h variables.
    """
    src = apply_subst(sigma, r.source)
    if not is_closed(src):
        raise ValueError("substitution is not closing for %s" % r.source)
    hyps = r.hyps_sorted()
    choice_lists = []
    for h in hyps:
        source = sigma.get(h.source)
        if source is None or not is_closed(source):
            raise ValueError("substitution is not closing for %s" % r.source)
        succ = sorted(
            (q for (l, q) in transitions(source, tss) if l == h.label), key=str
        )
        if not succ:
            return ()
        choice_lists.append(succ)
    out: set[tuple[str, Term]] = set()
    for combo in itertools.product(*choice_lists):
        env = dict(sigma)
        for h, q in zip(hyps, combo):
            env[h.target] = q
        out.add((r.label, apply_subst(env, r.target)))
    return tuple(sorted(out, key=lambda e: (e[0], str(e[1]))))


def instantiate_ruloid(r: Ruloid, sigma: Subst, tss: Tss
                       ) -> tuple[str, Term] | None:
    """One witnessed conclusion instance, or None if a hypothesis fails."""
    inst = instantiations(r, sigma, tss)
    return inst[0] if inst else None
