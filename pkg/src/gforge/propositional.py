"""From a first-order theory to a propositional frame presentation.

Sorts become partial equivalence relations on the index set {0..k-1},
relation symbols become indexed propositions, and every axiom is
instantiated at every tuple of indices with existentials turned into
joins.  The iso expansions build the theories of one isomorphism (two
tagged copies plus a graph relation per sort) and of a composable pair
(three copies plus two graph relations).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Optional

from .opens import (PER, REL, TOP, Generator, Open, join_all, leq_syntactic,
                    meet, meet_all, normalize)
from .theory import (And, Atom, Eq, Exists, Formula, Or, Relation, Sequent, Sort,
                     Theory, Top, conj, validate_theory)


class InvalidTheory(ValueError):
    pass


@dataclass(frozen=True)
class IndexSet:
    k: int

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError("index set size must be at least 1")

    def __iter__(self):
        return iter(range(self.k))

    def __len__(self) -> int:
        return self.k


def _as_k(idx) -> int:
    return idx.k if isinstance(idx, IndexSet) else int(idx)


@dataclass(frozen=True)
class Inequality:
    lhs: Open
    rhs: Open

    def __str__(self) -> str:
        return f"{self.lhs} <= {self.rhs}"


def generator_for(r: Relation, args: tuple[int, ...]) -> Generator:
    if r.iso:
        return Generator(r.iso, r.name, 0, args)
    return Generator(REL, r.name, r.copy, args)


def per_generator(s: Sort, n: int, m: int) -> Generator:
    return Generator(PER, s.name, s.copy, (n, m))


def _relations_in(f: Formula, acc: dict) -> dict:
    if isinstance(f, Atom):
        g = generator_for(f.relation, (0,) * f.relation.arity)
        acc[(g.kind, g.symbol, g.copy)] = f.relation.signature
    elif isinstance(f, (Or, And)):
        for h in (f.disjuncts if isinstance(f, Or) else f.conjuncts):
            _relations_in(h, acc)
    elif isinstance(f, Exists):
        _relations_in(f.body, acc)
    return acc


def _witnesses(g: Generator, n: int, sort: Sort, positions: Mapping) -> bool:
    """Whether g being true forces [n ~ n] at ``sort``."""
    if g.kind == PER:
        return g.symbol == sort.name and g.copy == sort.copy and n in g.args
    sig = positions.get((g.kind, g.symbol, g.copy))
    return sig is not None and any(a == n and s == sort for a, s in zip(g.args, sig))


def instantiate_formula(f: Formula, subst: Mapping[str, int], idx,
                        copy: Optional[int] = None) -> Open:
    """Translate a formula under a variable-to-index substitution.

    Existentials become joins over the index set, guarded by ``[n ~ n]``
    unless the body already forces the witness into the domain.
    ``copy`` re-tags every per/rel generator emitted.
    """
    k = _as_k(idx)
    positions = _relations_in(f, {})

    def go(g: Formula, env: Mapping[str, int]) -> Open:
        if isinstance(g, Top):
            return TOP
        if isinstance(g, Or):
            return join_all(go(h, env) for h in g.disjuncts)
        if isinstance(g, And):
            return meet_all(go(h, env) for h in g.conjuncts)
        if isinstance(g, Atom):
            try:
                args = tuple(env[v] for v in g.args)
            except KeyError as e:
                raise KeyError(f"unbound variable {e.args[0]}") from None
            return Open.gen(generator_for(g.relation, args))
        if isinstance(g, Eq):
            if g.left not in env or g.right not in env:
                missing = g.left if g.left not in env else g.right
                raise KeyError(f"unbound variable {missing}")
            return Open.gen(per_generator(g.sort, env[g.left], env[g.right]))
        if isinstance(g, Exists):
            terms = []
            for n in range(k):
                body = go(g.body, {**env, g.var: n})
                guard = per_generator(g.sort, n, n)
                for t in body.terms:
                    if any(_witnesses(h, n, g.sort, positions) for h in t):
                        terms.append(t)
                    else:
                        terms.append(t + (guard,))
            return normalize(terms)
        raise TypeError(f"not a formula: {g!r}")

    out = go(f, dict(subst))
    if copy is not None:
        out = normalize(tuple(h.retag(copy) if h.kind in (PER, REL) else h for h in t)
                        for t in out.terms)
    return out


@dataclass(frozen=True, eq=False)
class FramePresentation:
    """Generators plus inequalities; inequalities are built on first access."""

    theory: Theory
    k: int
    provenance: str = "objects"
    source_name: str = ""
    generators: tuple[Generator, ...] = field(init=False)

    def __post_init__(self) -> None:
        gens: list[Generator] = []
        for s in self.theory.sorts:
            gens.extend(per_generator(s, n, m) for n in range(self.k) for m in range(self.k))
        for r in self.theory.relations:
            gens.extend(generator_for(r, a)
                        for a in itertools.product(range(self.k), repeat=r.arity))
        object.__setattr__(self, "generators", tuple(sorted(gens)))

    @cached_property
    def generator_set(self) -> frozenset[Generator]:
        return frozenset(self.generators)

    @cached_property
    def _positions(self) -> dict:
        out = {}
        for s in self.theory.sorts:
            out[(PER, s.name, s.copy)] = (s, s)
        for r in self.theory.relations:
            g = generator_for(r, ())
            out[(g.kind, g.symbol, g.copy)] = r.signature
        return out

    def position_sorts(self, g: Generator) -> tuple[Sort, ...]:
        return self._positions[(g.kind, g.symbol, g.copy)]

    def owns(self, o: Open) -> bool:
        return o.generators() <= self.generator_set

    @cached_property
    def inequalities(self) -> tuple[Inequality, ...]:
        return tuple(_inequalities(self.theory, self.k))

    def __repr__(self) -> str:
        return (f"FramePresentation({self.provenance}, {self.source_name!r}, k={self.k}, "
                f"{len(self.generators)} generators)")


def _inequalities(t: Theory, k: int) -> list[Inequality]:
    out: dict[Inequality, None] = {}

    def add(lhs: Open, rhs: Open) -> None:
        if not leq_syntactic(lhs, rhs):
            out.setdefault(Inequality(lhs, rhs), None)

    idx = range(k)
    for s in t.sorts:
        for n, m in itertools.product(idx, repeat=2):
            add(Open.gen(per_generator(s, n, m)), Open.gen(per_generator(s, m, n)))
        for n, m, l in itertools.product(idx, repeat=3):
            add(Open.basic([per_generator(s, n, m), per_generator(s, m, l)]),
                Open.gen(per_generator(s, n, l)))
    for r in t.relations:
        tuples = list(itertools.product(idx, repeat=r.arity))
        for ns in tuples:
            g = generator_for(r, ns)
            for ms in tuples:
                lhs = [g] + [per_generator(s, a, b) for s, a, b in zip(r.signature, ns, ms)]
                add(Open.basic(lhs), Open.gen(generator_for(r, ms)))
        for ns in tuples:
            add(Open.gen(generator_for(r, ns)),
                Open.basic(per_generator(s, a, a) for s, a in zip(r.signature, ns)))
    for ax in t.axioms:
        names = [v for v, _ in ax.context]
        for ns in itertools.product(idx, repeat=len(names)):
            env = dict(zip(names, ns))
            guard = Open.basic(per_generator(s, n, n) for (_, s), n in zip(ax.context, ns))
            lhs = meet(guard, instantiate_formula(ax.premise, env, k))
            if lhs.is_bottom:
                continue
            add(lhs, instantiate_formula(ax.conclusion, env, k))
    return list(out)


def propositionalize(t: Theory, idx, provenance: str = "objects") -> FramePresentation:
    report = validate_theory(t)
    if not report.ok:
        raise InvalidTheory(str(report))
    return FramePresentation(t, _as_k(idx), provenance, t.name)


# --- iso expansions ------------------------------------------------------------

def retag_relation(r: Relation, copy: int) -> Relation:
    return Relation(r.name, tuple(Sort(s.name, copy) for s in r.signature), copy, r.iso)


def retag_formula(f: Formula, copy: int) -> Formula:
    if isinstance(f, Top):
        return f
    if isinstance(f, Or):
        return Or(tuple(retag_formula(g, copy) for g in f.disjuncts))
    if isinstance(f, And):
        return And(tuple(retag_formula(g, copy) for g in f.conjuncts))
    if isinstance(f, Atom):
        return Atom(retag_relation(f.relation, copy), f.args)
    if isinstance(f, Eq):
        return Eq(Sort(f.sort.name, copy), f.left, f.right)
    if isinstance(f, Exists):
        return Exists(f.var, Sort(f.sort.name, copy), retag_formula(f.body, copy))
    raise TypeError(f)


def _copy(t: Theory, c: int) -> tuple[list[Sort], list[Relation], list[Sequent]]:
    sorts = [Sort(s.name, c) for s in t.sorts]
    rels = [retag_relation(r, c) for r in t.relations]
    axioms = [Sequent(f"{ax.label}_{c}",
                      tuple((v, Sort(s.name, c)) for v, s in ax.context),
                      retag_formula(ax.premise, c), retag_formula(ax.conclusion, c))
              for ax in t.axioms]
    return sorts, rels, axioms


def iso_relation(tag: str, sort: str, a: int, b: int) -> Relation:
    return Relation(sort, (Sort(sort, a), Sort(sort, b)), 0, tag)


def _iso_axioms(t: Theory, tag: str, a: int, b: int) -> tuple[list[Relation], list[Sequent]]:
    rels = [iso_relation(tag, s.name, a, b) for s in t.sorts]
    axioms: list[Sequent] = []
    for s in t.sorts:
        g = iso_relation(tag, s.name, a, b)
        sa, sb = Sort(s.name, a), Sort(s.name, b)
        ctx = (("x", sa), ("y", sb), ("xp", sa), ("yp", sb))
        both = (Atom(g, ("x", "y")), Atom(g, ("xp", "yp")))
        left = And(both + (Eq(sa, "x", "xp"),))
        right = And(both + (Eq(sb, "y", "yp"),))
        axioms.append(Sequent(f"{tag}_{s.name}_wd_fwd", ctx, left, right))
        axioms.append(Sequent(f"{tag}_{s.name}_wd_bwd", ctx, right, left))
        axioms.append(Sequent(f"{tag}_{s.name}_surj", (("y", sb),), Top(),
                              Exists("x", sa, Atom(g, ("x", "y")))))
        axioms.append(Sequent(f"{tag}_{s.name}_total", (("x", sa),), Top(),
                              Exists("y", sb, Atom(g, ("x", "y")))))
    for r in t.relations:
        xs = tuple(f"x{i}" for i in range(1, r.arity + 1))
        ys = tuple(f"y{i}" for i in range(1, r.arity + 1))
        ctx = tuple((x, Sort(s.name, a)) for x, s in zip(xs, r.signature)) + \
            tuple((y, Sort(s.name, b)) for y, s in zip(ys, r.signature))
        graph = tuple(Atom(iso_relation(tag, s.name, a, b), (x, y))
                      for x, y, s in zip(xs, ys, r.signature))
        left = conj(*graph, Atom(retag_relation(r, a), xs))
        right = conj(*graph, Atom(retag_relation(r, b), ys))
        axioms.append(Sequent(f"{tag}_{r.name}_pres_fwd", ctx, left, right))
        axioms.append(Sequent(f"{tag}_{r.name}_pres_bwd", ctx, right, left))
    return rels, axioms


def _expand(t: Theory, copies: Iterable[int], isos: Iterable[tuple[str, int, int]],
            suffix: str) -> Theory:
    report = validate_theory(t)
    if not report.ok:
        raise InvalidTheory(str(report))
    sorts, rels, axioms = [], [], []
    for c in copies:
        s, r, a = _copy(t, c)
        sorts += s
        rels += r
        axioms += a
    for tag, a, b in isos:
        r, ax = _iso_axioms(t, tag, a, b)
        rels += r
        axioms += ax
    return Theory(f"{t.name}{suffix}" if t.name else "", tuple(sorts), tuple(rels), tuple(axioms))


def iso_expansion(t: Theory) -> Theory:
    """Theory of two models and an isomorphism ``alpha`` from copy 1 to copy 2."""
    return _expand(t, (1, 2), [("alpha", 1, 2)], "_iso")


def double_iso_expansion(t: Theory) -> Theory:
    """Theory of a composable pair: ``beta`` from copy 1 to 2, ``gamma`` from 2 to 3."""
    return _expand(t, (1, 2, 3), [("beta", 1, 2), ("gamma", 2, 3)], "_iso_iso")
