"""Signatures, terms, substitutions and equations.

Everything here is immutable and purely functional; terms are shared
freely between the analyses and the checkers.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Mapping


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, eq=False)
class App:
    op: str
    args: tuple = ()

    # derivative terms share subterms heavily, so hash, size and closedness
    # are computed once per node instead of per traversal
    def __post_init__(self):
        object.__setattr__(self, "_hash", hash((self.op, self.args)))
        object.__setattr__(
            self, "size",
            1 + sum(a.size for a in self.args if isinstance(a, App)))
        object.__setattr__(
            self, "depth",
            1 + max((a.depth for a in self.args if isinstance(a, App)),
                    default=0))
        object.__setattr__(
            self, "closed",
            all(isinstance(a, App) and a.closed for a in self.args))

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other) -> bool:
        # iterative, with an identity shortcut: shared subterms make deep
        # recursive comparison both slow and stack-hungry
        if self is other:
            return True
        if not isinstance(other, App):
            return NotImplemented
        stack: list = [(self, other)]
        while stack:
            a, b = stack.pop()
            if a is b:
                continue
            if isinstance(a, Var):
                if not (isinstance(b, Var) and a.name == b.name):
                    return False
                continue
            if (not isinstance(b, App) or a._hash != b._hash
                    or a.op != b.op or len(a.args) != len(b.args)):
                return False
            stack.extend(zip(a.args, b.args))
        return True

    def __str__(self) -> str:
        # iterative (derivative terms can nest far beyond the stack limit)
        # and cached, since sort keys print the same terms over and over
        cached = self.__dict__.get("_str")
        if cached is not None:
            return cached
        out: list[str] = []
        stack: list = [self]
        while stack:
            t = stack.pop()
            if isinstance(t, str):
                out.append(t)
            elif isinstance(t, Var):
                out.append(t.name)
            elif t.__dict__.get("_str") is not None:
                out.append(t.__dict__["_str"])
            elif not t.args:
                out.append(t.op)
            else:
                out.append(t.op + "(")
                stack.append(")")
                for i, a in enumerate(reversed(t.args)):
                    stack.append(a)
                    if i != len(t.args) - 1:
                        stack.append(", ")
        text = "".join(out)
        object.__setattr__(self, "_str", text)
        return text


Term = Var | App

Subst = Mapping[str, Term]


class SignatureError(ValueError):
    pass


@dataclass(frozen=True)
class Signature:
    """Operator names with fixed arities."""

    operators: tuple[tuple[str, int], ...]

    def __post_init__(self):
        seen: dict[str, int] = {}
        for name, arity in self.operators:
            if arity < 0:
                raise SignatureError("negative arity for %r" % name)
            if name in seen and seen[name] != arity:
                raise SignatureError(
                    "operator %r redeclared with arity %d (was %d)"
                    % (name, arity, seen[name])
                )
            seen[name] = arity

    @staticmethod
    def of(ops: Mapping[str, int]) -> "Signature":
        return Signature(tuple(sorted(ops.items())))

    def arity(self, op: str) -> int:
        for name, arity in self.operators:
            if name == op:
                return arity
        raise SignatureError("undeclared operator %r" % op)

    def __contains__(self, op: str) -> bool:
        return any(name == op for name, _ in self.operators)

    def as_dict(self) -> dict[str, int]:
        return dict(self.operators)

    def names(self) -> tuple[str, ...]:
        return tuple(sorted(name for name, _ in self.operators))

    def constants(self) -> tuple[str, ...]:
        return tuple(sorted(name for name, a in self.operators if a == 0))

    def merge(self, other: "Signature") -> "Signature":
        ops = self.as_dict()
        for name, arity in other.operators:
            if name in ops and ops[name] != arity:
                raise SignatureError(
                    "arity conflict for %r: %d vs %d" % (name, ops[name], arity)
                )
            ops[name] = arity
        return Signature.of(ops)


def check_term(t: Term, sig: Signature) -> None:
    """Raise SignatureError if t is not well-formed over sig."""
    if isinstance(t, Var):
        if t.name in sig:
            raise SignatureError("variable %r collides with an operator" % t.name)
        return
    n = sig.arity(t.op)
    if n != len(t.args):
        raise SignatureError(
            "operator %r expects %d arguments, got %d" % (t.op, n, len(t.args))
        )
    for a in t.args:
        check_term(a, sig)


def var_occurrences(t: Term) -> list[str]:
    """Variable names in leftmost depth-first order, with repetitions."""
    if isinstance(t, Var):
        return [t.name]
    out: list[str] = []
    for a in t.args:
        out.extend(var_occurrences(a))
    return out


def vars_of(t: Term) -> frozenset[str]:
    return frozenset(var_occurrences(t))


def is_closed(t: Term) -> bool:
    return isinstance(t, App) and t.closed


def term_size(t: Term) -> int:
    """Number of operator nodes; variables cost nothing."""
    return t.size if isinstance(t, App) else 0


def is_linear(t: Term) -> bool:
    occs = var_occurrences(t)
    return len(occs) == len(set(occs))


def apply_subst(sigma: Subst, t: Term) -> Term:
    # memoized per shared subterm: derivative terms are heavily shared DAGs,
    # and plain structural recursion revisits each shared node once per path
    memo: dict[int, Term] = {}

    def go(t: Term) -> Term:
        if isinstance(t, Var):
            return sigma.get(t.name, t)
        if t.closed:
            return t
        done = memo.get(id(t))
        if done is None:
            done = App(t.op, tuple(go(a) for a in t.args))
            memo[id(t)] = done
        return done

    if isinstance(t, Var):
        return sigma.get(t.name, t)
    if t.closed:
        return t
    return go(t)


def compose_subst(outer: Subst, inner: Subst) -> dict[str, Term]:
    """apply(compose(outer, inner), t) == apply(outer, apply(inner, t))."""
    out = {x: apply_subst(outer, s) for x, s in inner.items()}
    for x, s in outer.items():
        out.setdefault(x, s)
    return out


def is_closing_for(sigma: Subst, t: Term) -> bool:
    return is_closed(apply_subst(sigma, t))


def canonical_names(n: int, avoid: frozenset[str] = frozenset(),
                    prefix: str = "v") -> list[str]:
    names: list[str] = []
    i = 0
    while len(names) < n:
        name = "%s%d" % (prefix, i)
        if name not in avoid:
            names.append(name)
        i += 1
    return names


def canonical_rename(t: Term) -> tuple[Term, dict[str, str]]:
    """Rename variables to v0, v1, ... by first occurrence order.

    Returns the renamed term and the bijective renaming used.
    Idempotent on already-canonical terms.
    """
    order: list[str] = []
    for name in var_occurrences(t):
        if name not in order:
            order.append(name)
    fresh = canonical_names(len(order))
    if fresh == order:
        return t, {name: name for name in order}
    renaming = dict(zip(order, fresh))
    return apply_subst({x: Var(y) for x, y in renaming.items()}, t), renaming


def _compositions(total: int, parts: int, minimum: int) -> Iterator[tuple[int, ...]]:
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(minimum, total - minimum * (parts - 1) + 1):
        for rest in _compositions(total - first, parts - 1, minimum):
            yield (first,) + rest


def _terms_by_size(sig: Signature, max_size: int,
                   leaves: tuple[Term, ...]) -> list[list[Term]]:
    by_size: list[list[Term]] = [list(leaves)]
    for size in range(1, max_size + 1):
        bucket: list[Term] = []
        for name, arity in sorted(sig.operators):
            if arity == 0:
                if size == 1:
                    bucket.append(App(name))
                continue
            minimum = 0 if leaves else 1
            for split in _compositions(size - 1, arity, minimum):
                pools = [by_size[s] for s in split]
                for args in itertools.product(*pools):
                    bucket.append(App(name, args))
        by_size.append(bucket)
    return by_size


def enumerate_closed_terms(sig: Signature, max_size: int) -> Iterator[Term]:
    """All closed terms with at most max_size operator nodes.

    Deterministic size-lexicographic order; empty iff sig has no constants.
    """
    if max_size < 1:
        raise ValueError("max_size must be positive")
    for bucket in _terms_by_size(sig, max_size, ()):
        yield from bucket


def enumerate_open_terms(sig: Signature, max_size: int,
                         variables: tuple[str, ...]) -> Iterator[Term]:
    """All terms over sig whose variables are drawn from the given pool."""
    leaves = tuple(Var(v) for v in variables)
    for bucket in _terms_by_size(sig, max_size, leaves):
        yield from bucket


@dataclass(frozen=True)
class Equation:
    lhs: Term
    rhs: Term
    name: str | None = None
    over: str | None = None  # name of the TSS the equation is pinned to

    @property
    def is_proper(self) -> bool:
        return not isinstance(self.lhs, Var) and not isinstance(self.rhs, Var)

    def __str__(self) -> str:
        return "%s = %s" % (self.lhs, self.rhs)
