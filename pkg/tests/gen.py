"""Seeded random generators for small positive GSOS TSSs and extensions."""
from __future__ import annotations

import random

from opensos import App, Rule, Signature, Term, Trans, Tss, Var


def random_term(rng: random.Random, ops: dict[str, int], varpool: list[str],
                size: int) -> Term:
    consts = sorted(o for o, a in ops.items() if a == 0)
    if size <= 0 or (varpool and rng.random() < 0.35):
        if varpool and (not consts or rng.random() < 0.6):
            return Var(rng.choice(varpool))
        return App(rng.choice(consts))
    candidates = sorted(o for o, a in ops.items() if a >= 1)
    if not candidates:
        return App(rng.choice(consts))
    op = rng.choice(candidates)
    return App(op, tuple(random_term(rng, ops, varpool, size - 1)
                         for _ in range(ops[op])))


def random_rule(rng: random.Random, op: str, arity: int, labels: tuple,
                ops: dict[str, int], name: str) -> Rule:
    src_vars = ["x%d" % i for i in range(arity)]
    premises = []
    pool = list(src_vars)
    for i in range(arity):
        if rng.random() < 0.5:
            target = "y%d" % i
            premises.append(Trans(Var(src_vars[i]), rng.choice(labels),
                                  Var(target)))
            pool.append(target)
    target = random_term(rng, ops, pool, rng.randint(0, 2))
    conclusion = Trans(App(op, tuple(Var(v) for v in src_vars)),
                       rng.choice(labels), target)
    return Rule(name, tuple(premises), conclusion)


def random_tss(rng: random.Random, name: str = "T") -> Tss:
    labels = ("a", "b")[: rng.randint(1, 2)]
    ops: dict[str, int] = {"c0": 0}
    for i in range(rng.randint(0, 2)):
        ops["g%d" % i] = rng.randint(0, 2)
    rules = []
    serial = 0
    for op in sorted(ops):
        for _ in range(rng.randint(0, 2)):
            rules.append(random_rule(rng, op, ops[op], labels, ops,
                                     "r%d" % serial))
            serial += 1
    return Tss(name, Signature.of(ops), labels, tuple(rules), None)


def random_extension(rng: random.Random, base: Tss,
                     add_label: bool) -> Tss:
    """A disjoint extension layer: every rule defines a new operator."""
    labels = ("z",) if add_label else ()
    new_ops: dict[str, int] = {"n0": rng.randint(0, 2)}
    if rng.random() < 0.5:
        new_ops["n1"] = rng.randint(0, 1)
    all_ops = dict(base.all_signature.operators)
    all_ops.update(new_ops)
    all_labels = tuple(base.all_labels) + labels
    rules = []
    serial = 0
    for op in sorted(new_ops):
        for _ in range(rng.randint(1, 2)):
            rules.append(random_rule(rng, op, new_ops[op], all_labels,
                                     all_ops, "e%d" % serial))
            serial += 1
    return Tss(base.name + "x", Signature.of(new_ops), labels,
               tuple(rules), base)


def random_open_term(rng: random.Random, tss: Tss, max_size: int,
                     variables=("x", "y")) -> Term:
    return random_term(rng, tss.all_signature.as_dict(), list(variables),
                       rng.randint(0, max_size))


def random_closed_term(rng: random.Random, tss: Tss, max_size: int) -> Term:
    return random_term(rng, tss.all_signature.as_dict(), [],
                       rng.randint(1, max_size))
