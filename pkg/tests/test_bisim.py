import itertools

from opensos import (
    App,
    Bounds,
    Var,
    apply_subst,
    check,
    ci_bisim,
    enumerate_closed_terms,
    fh_bisim,
    hp_bisim,
    parse,
    parse_term,
    pfh_bisim,
    php_bisim,
    strong_bisim,
)

SMALL = Bounds(term_size=2, depth=8, state_cap=200, pair_cap=500)


def test_bounds_defaults():
    b = Bounds()
    assert (b.term_size, b.depth, b.state_cap, b.pair_cap) == (3, 12, 10_000, 5_000)


# ---------------------------------------------------------------------------
# strong


def test_strong_absorbing_inert_summand(corpus_tsss):
    ccs = corpus_tsss["Ccs"]
    v = strong_bisim(parse_term("plus(zero, pre_a(zero))", ccs),
                     parse_term("pre_a(zero)", ccs), ccs)
    assert v.holds
    assert "partition" in v.certificate


def test_strong_distinguishes_by_initial_action(corpus_tsss):
    ccs = corpus_tsss["Ccs"]
    v = strong_bisim(parse_term("pre_a(zero)", ccs), App("zero"), ccs)
    assert v.fails
    assert v.witness["label"] == "a"
    assert v.witness["responses"] == []  # zero has no answer at all


def test_strong_live_constant_vs_inert(corpus_tsss):
    t = corpus_tsss["ChoiceA"]
    v = strong_bisim(parse_term("plus(a, zero)", t), App("zero"), t)
    assert v.fails


def test_strong_bounded_fallback_on_infinite_state_spaces():
    doc = parse('tss T { labels: a, b; op c/0; op d/0; op s/1; '
                'rule "c": |- c -a-> s(c); '
                'rule "d": |- d -b-> s(d); '
                'rule "s": x -a-> x2 |- s(x) -a-> s(x2); }')
    t = doc.tss("T")
    small = Bounds(depth=6, state_cap=4)
    v = strong_bisim(App("c"), App("d"), t, small)
    assert v.fails  # initial labels differ even under the cap
    v2 = strong_bisim(App("c"), App("c"), t, small)
    assert v2.inconclusive


# ---------------------------------------------------------------------------
# ci


def test_ci_no_counterexample_over_inert_signature(corpus_tsss):
    t = corpus_tsss["Choice0"]
    v = ci_bisim(parse_term("plus(x, y)", t), App("zero"), t,
                 Bounds(term_size=4))
    assert v.inconclusive
    assert "no counterexample" in v.reason


def test_ci_witness_is_replayable(corpus_tsss):
    t = corpus_tsss["ChoiceA"]
    v = ci_bisim(parse_term("plus(x, y)", t), App("zero"), t, SMALL)
    assert v.fails
    sigma = {name: parse_term(text, t)
             for name, text in v.witness["sigma"].items()}
    lhs = apply_subst(sigma, parse_term("plus(x, y)", t))
    rhs = apply_subst(sigma, App("zero"))
    assert strong_bisim(lhs, rhs, t).fails


def test_ci_closed_pair_delegates_to_strong(corpus_tsss):
    ccs = corpus_tsss["Ccs"]
    v = ci_bisim(parse_term("plus(zero, pre_a(zero))", ccs),
                 parse_term("pre_a(zero)", ccs), ccs)
    assert v.holds


def test_ci_vacuous_without_constants(corpus_tsss):
    res = corpus_tsss["Res"]
    v = ci_bisim(parse_term("resA(pre_a(x))", res),
                 parse_term("pre_tau(resA(x))", res), res)
    assert v.holds and v.vacuous
    assert v.to_json()["vacuous"] is True


# ---------------------------------------------------------------------------
# fh / hp / proper variants


def test_fh_identity_and_reflexive_variables(corpus_tsss):
    ccs = corpus_tsss["Ccs"]
    assert fh_bisim(Var("x"), Var("x"), ccs).holds
    assert pfh_bisim(Var("x"), Var("x"), ccs).holds


def test_fh_distinct_variables_fail(corpus_tsss):
    ccs = corpus_tsss["Ccs"]
    assert fh_bisim(Var("x"), Var("y"), ccs).fails


def test_fh_forwarding_breaks_with_new_label(corpus_tsss):
    f, fb = corpus_tsss["F"], corpus_tsss["FB"]
    s, t = parse_term("f(x)", f), Var("x")
    assert fh_bisim(s, t, f).holds
    v = fh_bisim(s, t, fb)
    assert v.fails
    last = v.witness["trace"][-1]
    assert last["obligation"]["ruloid"] == "v0 -b-> h0 |- v0 -b-> h0"
    assert last.get("unmatched")


def test_hp_copying_choice(corpus_tsss):
    copy, copyb = corpus_tsss["Copy"], corpus_tsss["CopyB"]
    s = parse_term("plus(x, y)", copy)
    t = parse_term("plus(y, x)", copy)
    hv = hp_bisim(s, t, copy)
    assert hv.holds
    states = [tuple(st["pair"]) + (tuple(st["gamma"]),)
              for st in hv.certificate["states"]]
    assert ("plus(v0, v0)", "v0", ("v1 -a-> v0",)) in states
    assert hp_bisim(s, t, copyb).fails
    assert php_bisim(s, t, copy).fails


def test_proper_variant_rejects_improper_root(corpus_tsss):
    f = corpus_tsss["F"]
    v = pfh_bisim(parse_term("f(x)", f), Var("x"), f)
    assert v.fails
    assert "improper" in str(v.witness)


def test_proper_holds_implies_plain_holds(corpus_tsss):
    ccs = corpus_tsss["Ccs"]
    s = parse_term("plus(x, plus(y, z))", ccs)
    t = parse_term("plus(plus(x, y), z)", ccs)
    assert pfh_bisim(s, t, ccs).holds
    assert fh_bisim(s, t, ccs).holds


def test_hierarchy_on_sample_pairs(corpus_tsss):
    pairs = [
        ("Ccs", "plus(x, y)", "plus(y, x)"),
        ("Ccs", "plus(x, x)", "x"),
        ("Ccs", "plus(x, zero)", "x"),
        ("F", "f(x)", "x"),
        ("FB", "f(x)", "x"),
        ("Copy", "plus(x, y)", "plus(y, x)"),
        ("ChoiceA", "plus(x, y)", "zero"),
    ]
    for name, ls, rs in pairs:
        t = corpus_tsss[name]
        s1, s2 = parse_term(ls, t), parse_term(rs, t)
        fh = fh_bisim(s1, s2, t, SMALL)
        hp = hp_bisim(s1, s2, t, SMALL)
        ci = ci_bisim(s1, s2, t, SMALL)
        if fh.holds:
            assert not hp.fails, (name, ls, rs)
        if hp.holds:
            assert not ci.fails, (name, ls, rs)


def test_closed_term_coincidence(corpus_tsss):
    t = corpus_tsss["ChoiceA"]
    pool = list(enumerate_closed_terms(t.all_signature, 2))
    for p, q in itertools.product(pool, repeat=2):
        strong = strong_bisim(p, q, t)
        for checker in (ci_bisim, fh_bisim, hp_bisim):
            other = checker(p, q, t, SMALL)
            if strong.holds and not other.inconclusive:
                assert other.holds, (str(p), str(q), checker.__name__)
            if strong.fails:
                assert not other.holds, (str(p), str(q), checker.__name__)


def test_verdicts_are_alpha_invariant(corpus_tsss):
    ccs = corpus_tsss["Ccs"]
    for notion in ("ci", "fh", "hp", "pfh", "php"):
        a = check(notion, parse_term("plus(p, q)", ccs),
                  parse_term("plus(q, p)", ccs), ccs, SMALL)
        b = check(notion, parse_term("plus(u, w)", ccs),
                  parse_term("plus(w, u)", ccs), ccs, SMALL)
        assert a.kind == b.kind, notion


def test_verdict_json_shape(corpus_tsss):
    f = corpus_tsss["F"]
    v = fh_bisim(parse_term("f(x)", f), Var("x"), f)
    j = v.to_json()
    assert j["verdict"] == "holds"
    assert "certificate" in j
