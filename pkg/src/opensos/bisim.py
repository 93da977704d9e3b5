"""Equivalence checkers: strong, ci-, fh-, hp-bisimilarity and proper variants.

Every checker returns a three-valued Verdict: Holds with a certificate,
Fails with a replayable witness, or InconclusiveAtBound.  fh/hp work at the
most-general-ruloid level; hypothesis-target merging is covered explicitly
(merged pair variants for fh, alignment maps for hp), so Holds is sound and
Fails always bottoms out in a concretely unmatched ruloid.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .terms import (
    App,
    Term,
    Var,
    apply_subst,
    canonical_names,
    enumerate_closed_terms,
    term_size,
    var_occurrences,
    vars_of,
)
from .tss import Tss
from .ruloids import (
    STATE_SIZE_CAP,
    Hyp,
    Ruloid,
    explore,
    ruloids,
    succ_key,
    transitions,
)

HOLDS = "holds"
FAILS = "fails"
INCONCLUSIVE = "inconclusive"


@dataclass
class Verdict:
    kind: str
    reason: str = ""
    certificate: object = None
    witness: object = None
    vacuous: bool = False

    @property
    def holds(self) -> bool:
        return self.kind == HOLDS

    @property
    def fails(self) -> bool:
        return self.kind == FAILS

    @property
    def inconclusive(self) -> bool:
        return self.kind == INCONCLUSIVE

    def to_json(self) -> dict:
        out: dict = {"verdict": self.kind}
        if self.reason:
            out["reason"] = self.reason
        if self.vacuous:
            out["vacuous"] = True
        if self.certificate is not None:
            out["certificate"] = self.certificate
        if self.witness is not None:
            out["witness"] = self.witness
        return out


@dataclass(frozen=True)
class Bounds:
    term_size: int = 3
    depth: int = 12
    state_cap: int = 10_000
    pair_cap: int = 5_000


# ---------------------------------------------------------------------------
# strong bisimilarity on closed terms


def _edges_by_state(lts_edges) -> dict[Term, list[tuple[str, Term]]]:
    out: dict[Term, list[tuple[str, Term]]] = {}
    for (p, l, q) in lts_edges:
        out.setdefault(p, []).append((l, q))
    for succ in out.values():
        succ.sort(key=lambda e: (e[0], str(e[1])))
    return out


def _refinement_history(states, out) -> list[dict[Term, int]]:
    order = sorted(states, key=str)
    block = {s: 0 for s in order}
    history = [dict(block)]
    while True:
        sigs = {
            s: (block[s],
                frozenset((l, block[q]) for (l, q) in out.get(s, ())))
            for s in order
        }
        ids: dict = {}
        new = {}
        for s in order:
            new[s] = ids.setdefault(sigs[s], len(ids))
        if new == block:
            return history
        block = new
        history.append(dict(block))


def _distinguish(p: Term, q: Term, history, out) -> dict:
    level = next(i for i, blk in enumerate(history) if blk[p] != blk[q])
    prev = history[level - 1]

    def sig(s):
        return {(l, prev[s2]) for (l, s2) in out.get(s, ())}

    for side, a, b in (("left", p, q), ("right", q, p)):
        extra = sig(a) - sig(b)
        if not extra:
            continue
        l, cls = min(extra, key=lambda e: (e[0], e[1]))
        a2 = next(s2 for (l2, s2) in out.get(a, ()) if l2 == l and prev[s2] == cls)
        responses = []
        for (l2, b2) in out.get(b, ()):
            if l2 == l:
                responses.append(
                    {"to": str(b2), "then": _distinguish(a2, b2, history, out)}
                )
        return {"side": side, "label": l, "move": str(a2),
                "from": str(a), "responses": responses}
    raise AssertionError("states separated without a distinguishing move")


_DISTINGUISH_WORK_CAP = 50_000


def _bounded_distinguish(p: Term, q: Term, tss: Tss, depth: int,
                         memo: dict) -> dict | None:
    """A distinguishing move tree within `depth` steps, or None.

    None only ever weakens the outcome to inconclusive, so bailing out when
    the pair space explodes is sound.
    """
    if depth == 0 or len(memo) > _DISTINGUISH_WORK_CAP:
        return None
    key = (p, q, depth)
    if key in memo:
        return memo[key]
    memo[key] = None  # guard against needless re-entry
    result = None
    for side, a, b in (("left", p, q), ("right", q, p)):
        for (l, a2) in sorted(transitions(a, tss), key=succ_key):
            if term_size(a2) > STATE_SIZE_CAP:
                continue  # pruning attacker moves only loses completeness
            responses = []
            matched = False
            for (l2, b2) in sorted(transitions(b, tss), key=succ_key):
                if l2 != l:
                    continue
                if term_size(b2) > STATE_SIZE_CAP:
                    matched = True  # assume the oversized response answers
                    break
                w = _bounded_distinguish(a2, b2, tss, depth - 1, memo)
                if w is None:
                    matched = True
                    break
                responses.append({"to": str(b2), "then": w})
            if not matched:
                result = {"side": side, "label": l, "move": str(a2),
                          "from": str(a), "responses": responses}
                break
        if result:
            break
    memo[key] = result
    return result


def strong_bisim(p: Term, q: Term, tss: Tss,
                 bounds: Bounds = Bounds()) -> Verdict:
    """Exact when both reachable LTSs close within the state cap; otherwise
    stratified up to `depth`, where only Fails is definitive."""
    lp = explore(p, tss, bounds.state_cap)
    lq = explore(q, tss, bounds.state_cap)
    if lp.complete and lq.complete:
        states = lp.states | lq.states
        out = _edges_by_state(lp.transitions | lq.transitions)
        history = _refinement_history(states, out)
        final = history[-1]
        if final[p] == final[q]:
            classes: dict[int, list[str]] = {}
            for s, b in final.items():
                classes.setdefault(b, []).append(str(s))
            cert = {"partition": sorted(sorted(c) for c in classes.values())}
            return Verdict(HOLDS, "partition refinement", certificate=cert)
        return Verdict(FAILS, "distinguished by partition refinement",
                       witness=_distinguish(p, q, history, out))
    w = _bounded_distinguish(p, q, tss, bounds.depth, {})
    if w is not None:
        return Verdict(FAILS, "distinguished within depth bound", witness=w)
    return Verdict(
        INCONCLUSIVE,
        "state cap %d exceeded; %d-step bisimilar" % (bounds.state_cap, bounds.depth),
    )


# ---------------------------------------------------------------------------
# closed-instance bisimilarity


def ci_bisim(s: Term, t: Term, tss: Tss, bounds: Bounds = Bounds()) -> Verdict:
    """Sweep all closing substitutions with images up to the term size bound.

    Fails is definitive.  For open terms a clean sweep is reported as
    "no counterexample up to bound", never as a definitive Holds.
    """
    names = sorted(vars_of(s) | vars_of(t))
    if not names:
        return strong_bisim(s, t, tss, bounds)
    pool = list(enumerate_closed_terms(tss.all_signature, bounds.term_size))
    if not pool:
        return Verdict(
            HOLDS, "no constants in signature: no closing substitutions exist",
            vacuous=True,
        )
    count = 0
    for images in itertools.product(pool, repeat=len(names)):
        sigma = dict(zip(names, images))
        inner = strong_bisim(apply_subst(sigma, s), apply_subst(sigma, t), tss, bounds)
        count += 1
        if inner.fails:
            witness = {
                "sigma": {x: str(v) for x, v in sorted(sigma.items())},
                "instance": [str(apply_subst(sigma, s)), str(apply_subst(sigma, t))],
                "distinguisher": inner.witness,
            }
            return Verdict(FAILS, "closing substitution distinguishes",
                           witness=witness)
    return Verdict(
        INCONCLUSIVE,
        "no counterexample up to bound (term size %d, %d substitutions)"
        % (bounds.term_size, count),
    )


# ---------------------------------------------------------------------------
# fh / hp games


def _is_proper_pair(s: Term, t: Term) -> bool:
    if isinstance(s, Var) or isinstance(t, Var):
        return isinstance(s, Var) and isinstance(t, Var) and s.name == t.name
    return True


def _canon_pair(s: Term, t: Term) -> tuple[Term, Term]:
    order: list[str] = []
    for name in var_occurrences(s) + var_occurrences(t):
        if name not in order:
            order.append(name)
    ren = {x: Var(y) for x, y in zip(order, canonical_names(len(order)))}
    return apply_subst(ren, s), apply_subst(ren, t)


def _norm_pair(s: Term, t: Term) -> tuple[Term, Term]:
    a = _canon_pair(s, t)
    b = _canon_pair(t, s)
    return min(a, b, key=lambda pr: (str(pr[0]), str(pr[1])))


def _partitions(items: list[str]):
    """All set partitions, as maps item -> representative (first of block)."""
    if not items:
        yield {}
        return
    first, rest = items[0], items[1:]
    for sub in _partitions(rest):
        blocks: dict[str, list[str]] = {}
        for x, rep in sub.items():
            blocks.setdefault(rep, []).append(x)
        # first in its own block
        out = dict(sub)
        out[first] = first
        yield out
        # first joined to an existing block (representative stays minimal-first)
        for rep in sorted(blocks):
            out = {x: (first if r == rep else r) for x, r in sub.items()}
            out[first] = first
            yield out


def _merge_variants(s: Term, t: Term) -> list[tuple[Term, Term]]:
    names = sorted(vars_of(s) | vars_of(t))
    out = []
    for part in _partitions(names):
        if all(x == rep for x, rep in part.items()):
            continue
        sigma = {x: Var(rep) for x, rep in part.items()}
        out.append(_norm_pair(apply_subst(sigma, s), apply_subst(sigma, t)))
    uniq: dict[tuple[Term, Term], None] = {}
    for pr in out:
        uniq.setdefault(pr, None)
    return sorted(uniq, key=lambda pr: (str(pr[0]), str(pr[1])))


def _group_hyps(hyps) -> dict[tuple[str, str], list[Hyp]]:
    groups: dict[tuple[str, str], list[Hyp]] = {}
    for h in sorted(hyps, key=lambda h: (h.source, h.label, h.target)):
        groups.setdefault((h.source, h.label), []).append(h)
    return groups


def _bijective_alignments(cand: Ruloid, want: Ruloid):
    """Maps from cand's hypothesis targets onto want's, source/label fixed."""
    gc = _group_hyps(cand.hyps)
    gw = _group_hyps(want.hyps)
    if set(gc) != set(gw) or any(len(gc[k]) != len(gw[k]) for k in gc):
        return
    keys = sorted(gc)
    per_group = [
        [list(zip((h.target for h in gc[k]), (h.target for h in perm)))
         for perm in itertools.permutations(gw[k])]
        for k in keys
    ]
    for combo in itertools.product(*per_group):
        mapping: dict[str, str] = {}
        for pairs in combo:
            for a, b in pairs:
                mapping[a] = b
        yield mapping


@dataclass
class _Node:
    key: object
    obligations: list  # of (description dict, [successor keys])
    improper: bool


class _Game:
    """Shared safety-game core: build reachable nodes, then solve for 'bad'.

    A node is bad when some obligation has only bad options (an obligation
    with no options at all is an unmatched ruloid).  Bad is a least fixpoint,
    so Fails verdicts are definitive even under the pair cap.
    """

    SIZE_CAP = 24  # per-side operator-node budget for explored derivatives
    HYP_CAP = 4  # merge maps and embeddings are exponential in hyp count

    def __init__(self, tss: Tss, pair_cap: int, proper: bool):
        self.tss = tss
        self.pair_cap = pair_cap
        self.proper = proper
        self.nodes: dict = {}
        self.capped = False

    def node_for(self, key):
        raise NotImplementedError

    def key_size(self, key) -> int:
        return max(term_size(key[0]), term_size(key[1]))

    def ruloid_oversized(self, r: Ruloid) -> bool:
        return term_size(r.target) > self.SIZE_CAP or len(r.hyps) > self.HYP_CAP

    def run(self, root_key) -> Verdict:
        frontier = [root_key]
        queued = {root_key}
        while frontier:
            nxt = []
            for key in frontier:
                if len(self.nodes) >= self.pair_cap:
                    self.capped = True
                    break
                node = self.node_for(key)
                self.nodes[key] = node
                for _, options in node.obligations:
                    for opt in options:
                        if opt not in queued and opt not in self.nodes:
                            if self.key_size(opt) > self.SIZE_CAP:
                                # runaway derivative growth: leave the node
                                # unexplored; Holds then requires a retry with
                                # different bounds, Fails stays definitive
                                self.capped = True
                                continue
                            queued.add(opt)
                            nxt.append(opt)
            if self.capped:
                break
            frontier = nxt
        bad: dict = {}
        # strictly increasing assignment order, so a witness step can always
        # descend to an option marked bad before the current node was
        order = itertools.count(1)
        changed = True
        while changed:
            changed = False
            for key, node in self.nodes.items():
                if key in bad:
                    continue
                if self.proper and node.improper:
                    bad[key] = (next(order), {"improper": self.describe(key)}, None)
                    changed = True
                    continue
                for desc, options in node.obligations:
                    if all(opt in bad for opt in options):
                        bad[key] = (next(order), desc, options)
                        changed = True
                        break
        if root_key in bad:
            return Verdict(FAILS, self.fail_reason(),
                           witness=self._witness(root_key, bad))
        if not self.capped:
            good = [k for k in self.nodes if k not in bad]
            return Verdict(HOLDS, self.hold_reason(), certificate=self.certificate(good))
        return Verdict(INCONCLUSIVE,
                       "pair cap %d reached without closure" % self.pair_cap)

    def _witness(self, key, bad) -> dict:
        trace = []
        while True:
            rnd, desc, options = bad[key]
            step = {"state": self.describe(key), "obligation": desc}
            trace.append(step)
            if options is None:
                break
            live = [o for o in options if o in bad and bad[o][0] < rnd]
            if not live:  # no options at all: the unmatched ruloid
                step["unmatched"] = True
                break
            key = min(live, key=str)
        return {"trace": trace}

    def describe(self, key):
        raise NotImplementedError

    def certificate(self, good_keys):
        raise NotImplementedError

    def fail_reason(self) -> str:
        return "unmatched ruloid"

    def hold_reason(self) -> str:
        return "relation closed"


class _FhGame(_Game):
    def node_for(self, key) -> _Node:
        s, t = key
        obligations = []
        for a, b in ((s, t), (t, s)):
            for r in ruloids(a, self.tss):
                if self.ruloid_oversized(r):
                    # the obligation cannot even be posed within the budget;
                    # dropping it blocks Holds (capped) without forcing Fails
                    self.capped = True
                    continue
                options = []
                oversized = False
                for r2 in ruloids(b, self.tss):
                    if r2.label != r.label:
                        continue
                    if self.ruloid_oversized(r2):
                        oversized = True
                        continue
                    for mapping in _bijective_alignments(r2, r):
                        t2 = apply_subst({x: Var(y) for x, y in mapping.items()},
                                         r2.target)
                        options.append(_norm_pair(r.target, t2))
                if oversized:
                    # some response was beyond the budget: treat the
                    # obligation as met at this bound, never as refuted
                    self.capped = True
                    continue
                desc = {"from": [str(a), str(b)], "ruloid": str(r)}
                obligations.append((desc, sorted(set(options), key=str)))
        # the relation must also contain every variable-merging variant
        for variant in _merge_variants(s, t):
            obligations.append(
                ({"from": [str(s), str(t)],
                  "merged-variant": [str(variant[0]), str(variant[1])]},
                 [variant])
            )
        return _Node(key, obligations, not _is_proper_pair(s, t))

    def describe(self, key):
        return [str(key[0]), str(key[1])]

    def certificate(self, good_keys):
        return {
            "pairs": sorted([str(s), str(t)] for (s, t) in good_keys),
            "discipline": "most-general ruloids with merged-variable variants",
        }


def fh_bisim(s: Term, t: Term, tss: Tss, bounds: Bounds = Bounds(),
             proper: bool = False) -> Verdict:
    game = _FhGame(tss, bounds.pair_cap, proper)
    return game.run(_norm_pair(s, t))


# --- hp ---


def _canon_state(s: Term, t: Term, gamma: frozenset[Hyp]
                 ) -> tuple[Term, Term, frozenset[Hyp]]:
    order: list[str] = []
    for name in var_occurrences(s) + var_occurrences(t):
        if name not in order:
            order.append(name)
    known = {x: i for i, x in enumerate(order)}
    big = 1 << 30

    def hyp_key(h: Hyp):
        return (min(known.get(h.source, big), known.get(h.target, big)),
                known.get(h.source, big), h.label,
                known.get(h.target, big), h.source, h.target)

    for h in sorted(gamma, key=hyp_key):
        for name in (h.source, h.target):
            if name not in order:
                order.append(name)
    ren = dict(zip(order, canonical_names(len(order))))
    sub = {x: Var(y) for x, y in ren.items()}
    new_gamma = frozenset(
        Hyp(ren[h.source], h.label, ren[h.target]) for h in gamma
    )
    return apply_subst(sub, s), apply_subst(sub, t), new_gamma


def _state_key_str(state) -> tuple[str, str, tuple[str, ...]]:
    s, t, gamma = state
    return (str(s), str(t),
            tuple(sorted(str(h) for h in gamma)))


def _norm_state(s: Term, t: Term, gamma: frozenset[Hyp]):
    a = _canon_state(s, t, gamma)
    b = _canon_state(t, s, gamma)
    return min(a, b, key=_state_key_str)


def _gc(s: Term, t: Term, gamma: frozenset[Hyp]) -> frozenset[Hyp]:
    live = vars_of(s) | vars_of(t)
    return frozenset(h for h in gamma if h.source in live or h.target in live)


def _merge_maps(r: Ruloid, gamma: frozenset[Hyp]):
    """Alignment maps for an attacker ruloid's fresh hypothesis targets.

    Each target may stay fresh, merge with an earlier same-shaped fresh
    target, or align with the target of a same-shaped hypothesis in gamma.
    """
    hyps = r.hyps_sorted()
    choice_lists = []
    for i, h in enumerate(hyps):
        choices = [h.target]
        for prev in hyps[:i]:
            if (prev.source, prev.label) == (h.source, h.label):
                choices.append(prev.target)
        for g in sorted(gamma, key=str):
            if (g.source, g.label) == (h.source, h.label) and g.target != h.source:
                choices.append(g.target)
        choice_lists.append(choices)
    seen = set()
    for combo in itertools.product(*choice_lists):
        mapping = {h.target: tgt for h, tgt in zip(hyps, combo)}
        # resolve chains from merging onto earlier fresh targets
        def resolve(x: str) -> str:
            while mapping.get(x, x) != x:
                x = mapping[x]
            return x
        flat = tuple(sorted((k, resolve(k)) for k in mapping))
        if flat in seen:
            continue
        seen.add(flat)
        yield {k: resolve(k) for k in mapping}


def _embeddings(cand: Ruloid, gamma: frozenset[Hyp]):
    """Injective maps of cand's hypotheses onto same-shaped gamma hypotheses."""
    groups = _group_hyps(gamma)
    cand_groups = _group_hyps(cand.hyps)
    keys = sorted(cand_groups)
    per_group = []
    for k in keys:
        pool = groups.get(k, [])
        need = cand_groups[k]
        if len(pool) < len(need):
            return
        per_group.append([
            list(zip((h.target for h in need), (g.target for g in pick)))
            for pick in itertools.permutations(pool, len(need))
        ])
    for combo in itertools.product(*per_group):
        mapping: dict[str, str] = {}
        for pairs in combo:
            for a, b in pairs:
                mapping[a] = b
        yield mapping


class _HpGame(_Game):
    def key_size(self, key) -> int:
        s, t, gamma = key
        # merge-map and embedding enumeration is combinatorial in the
        # accumulated hypotheses, so a growing gamma counts against the
        # budget much faster than growing terms do
        return max(term_size(s), term_size(t), 6 * len(gamma))

    def node_for(self, key) -> _Node:
        s, t, gamma = key
        obligations = []
        for a, b, flip in ((s, t, False), (t, s, True)):
            for r in ruloids(a, self.tss):
                if self.ruloid_oversized(r):
                    self.capped = True
                    continue
                for mu in _merge_maps(r, gamma):
                    sub = {x: Var(y) for x, y in mu.items()}
                    merged = frozenset(
                        Hyp(h.source, h.label, mu[h.target]) for h in r.hyps
                    )
                    gamma2 = merged | gamma
                    a2 = apply_subst(sub, r.target)
                    options = []
                    oversized = False
                    for r2 in ruloids(b, self.tss):
                        if r2.label != r.label:
                            continue
                        if self.ruloid_oversized(r2):
                            oversized = True
                            continue
                        for emb in _embeddings(r2, gamma2):
                            b2 = apply_subst(
                                {x: Var(y) for x, y in emb.items()}, r2.target
                            )
                            left, right = (b2, a2) if flip else (a2, b2)
                            options.append(_norm_state(
                                left, right, _gc(left, right, gamma2)
                            ))
                    if oversized:
                        self.capped = True
                        continue
                    desc = {
                        "from": [str(a), str(b)],
                        "ruloid": str(r),
                        "aligned-gamma": sorted(str(h) for h in merged),
                        "accumulated": sorted(str(h) for h in gamma2),
                    }
                    obligations.append(
                        (desc, sorted(set(options), key=_state_key_str))
                    )
        return _Node(key, obligations, not _is_proper_pair(s, t))

    def describe(self, key):
        s, t, gamma = key
        return {"pair": [str(s), str(t)],
                "gamma": sorted(str(h) for h in gamma)}

    def certificate(self, good_keys):
        return {
            "states": sorted((self.describe(k) for k in good_keys),
                             key=lambda d: (d["pair"], d["gamma"])),
            "discipline": ("most-general ruloids padded with the accumulated "
                           "hypothesis set; dead hypotheses garbage-collected"),
        }


def hp_bisim(s: Term, t: Term, tss: Tss, bounds: Bounds = Bounds(),
             proper: bool = False) -> Verdict:
    game = _HpGame(tss, bounds.pair_cap, proper)
    return game.run(_norm_state(s, t, frozenset()))


def pfh_bisim(s: Term, t: Term, tss: Tss, bounds: Bounds = Bounds()) -> Verdict:
    return fh_bisim(s, t, tss, bounds, proper=True)


def php_bisim(s: Term, t: Term, tss: Tss, bounds: Bounds = Bounds()) -> Verdict:
    return hp_bisim(s, t, tss, bounds, proper=True)


NOTIONS = ("strong", "ci", "fh", "hp", "pfh", "php")


def check(notion: str, s: Term, t: Term, tss: Tss,
          bounds: Bounds = Bounds()) -> Verdict:
    if notion == "strong":
        return strong_bisim(s, t, tss, bounds)
    if notion == "ci":
        return ci_bisim(s, t, tss, bounds)
    if notion == "fh":
        return fh_bisim(s, t, tss, bounds)
    if notion == "hp":
        return hp_bisim(s, t, tss, bounds)
    if notion == "pfh":
        return pfh_bisim(s, t, tss, bounds)
    if notion == "php":
        return php_bisim(s, t, tss, bounds)
    raise ValueError("unknown notion %r" % notion)
