"""Sorts, relation symbols, geometric formulas, sequents and theories.

Symbols carry an optional copy tag so the iso expansions (two or three
tagged copies of a theory plus graph relations between them) can be
expressed with the same vocabulary as user-written theories.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional, Union

ISO_TAGS = ("alpha", "beta", "gamma")


@dataclass(frozen=True, order=True)
class Sort:
    name: str
    copy: int = 0

    def __str__(self) -> str:
        return f"{self.name}{self.copy}" if self.copy else self.name


@dataclass(frozen=True, order=True)
class Relation:
    """A relation symbol.

    For the graph relations of an iso expansion, ``iso`` is one of
    ``alpha``, ``beta``, ``gamma`` and ``name`` is the underlying sort.
    """

    name: str
    signature: tuple[Sort, ...] = ()
    copy: int = 0
    iso: Optional[str] = None

    @property
    def arity(self) -> int:
        return len(self.signature)

    def __str__(self) -> str:
        if self.iso:
            return f"{self.iso}.{self.name}"
        return f"{self.name}{self.copy}" if self.copy else self.name


# --- formulas ---------------------------------------------------------------

@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Or:
    disjuncts: tuple["Formula", ...] = ()


@dataclass(frozen=True)
class And:
    conjuncts: tuple["Formula", ...] = ()


@dataclass(frozen=True)
class Atom:
    relation: Relation
    args: tuple[str, ...] = ()


@dataclass(frozen=True)
class Eq:
    sort: Sort
    left: str
    right: str


@dataclass(frozen=True)
class Exists:
    var: str
    sort: Sort
    body: "Formula"


Formula = Union[Top, Or, And, Atom, Eq, Exists]
FALSE = Or(())
TRUE = Top()


@dataclass(frozen=True)
class Sequent:
    label: str
    context: tuple[tuple[str, Sort], ...]
    premise: Formula
    conclusion: Formula


@dataclass(frozen=True)
class Theory:
    name: str = ""
    sorts: tuple[Sort, ...] = ()
    relations: tuple[Relation, ...] = ()
    axioms: tuple[Sequent, ...] = ()

    def relation(self, name: str, copy: int = 0, iso: Optional[str] = None) -> Relation:
        for r in self.relations:
            if r.name == name and r.copy == copy and r.iso == iso:
                return r
        raise KeyError(name)

    def sort(self, name: str, copy: int = 0) -> Sort:
        s = Sort(name, copy)
        if s not in self.sorts:
            raise KeyError(name)
        return s

    @property
    def is_propositional(self) -> bool:
        return not self.sorts


# --- validation --------------------------------------------------------------

@dataclass(frozen=True)
class Diagnostic:
    message: str
    label: Optional[str] = None
    path: tuple[int, ...] = ()

    def __str__(self) -> str:
        where = f" at axiom {self.label}" if self.label else ""
        if self.path:
            where += " (subformula " + ".".join(map(str, self.path)) + ")"
        return self.message + where


@dataclass(frozen=True)
class Report:
    diagnostics: tuple[Diagnostic, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.diagnostics

    def __str__(self) -> str:
        return "ok" if self.ok else "\n".join(map(str, self.diagnostics))


def _check_formula(f: Formula, scope: dict[str, Sort], theory: Theory,
                   label: str, path: tuple[int, ...]) -> Iterator[Diagnostic]:
    if isinstance(f, Top):
        return
    if isinstance(f, (Or, And)):
        parts = f.disjuncts if isinstance(f, Or) else f.conjuncts
        for i, g in enumerate(parts):
            yield from _check_formula(g, scope, theory, label, path + (i,))
        return
    if isinstance(f, Atom):
        r = f.relation
        if r not in theory.relations:
            yield Diagnostic(f"undeclared relation {r}", label, path)
            return
        if len(f.args) != r.arity:
            yield Diagnostic(f"arity mismatch: {r} expects {r.arity} "
                             f"argument(s), got {len(f.args)}", label, path)
            return
        for v, s in zip(f.args, r.signature):
            if v not in scope:
                yield Diagnostic(f"unbound variable {v}", label, path)
            elif scope[v] != s:
                yield Diagnostic(f"sort mismatch: {v} has sort {scope[v]}, "
                                 f"{r} expects {s}", label, path)
        return
    if isinstance(f, Eq):
        if f.sort not in theory.sorts:
            yield Diagnostic(f"undeclared sort {f.sort}", label, path)
        for v in (f.left, f.right):
            if v not in scope:
                yield Diagnostic(f"unbound variable {v}", label, path)
            elif scope[v] != f.sort:
                yield Diagnostic(f"sort mismatch: {v} has sort {scope[v]}, "
                                 f"equality is at sort {f.sort}", label, path)
        return
    if isinstance(f, Exists):
        if f.sort not in theory.sorts:
            yield Diagnostic(f"undeclared sort {f.sort}", label, path)
        if f.var in scope:
            yield Diagnostic(f"variable {f.var} shadows an outer binding", label, path)
            return
        yield from _check_formula(f.body, {**scope, f.var: f.sort}, theory,
                                  label, path + (0,))
        return
    yield Diagnostic(f"not a formula: {f!r}", label, path)


def validate_theory(t: Theory) -> Report:
    """Check well-sortedness and uniqueness invariants; never raises."""
    out: list[Diagnostic] = []
    seen_sorts: set[Sort] = set()
    for s in t.sorts:
        if not s.name:
            out.append(Diagnostic("empty sort name"))
        if s in seen_sorts:
            out.append(Diagnostic(f"duplicate sort {s}"))
        seen_sorts.add(s)
    seen_rels: set[tuple] = set()
    for r in t.relations:
        key = (r.name, r.copy, r.iso)
        if not r.name:
            out.append(Diagnostic("empty relation name"))
        if key in seen_rels:
            out.append(Diagnostic(f"duplicate relation {r}"))
        seen_rels.add(key)
        for s in r.signature:
            if s not in seen_sorts:
                out.append(Diagnostic(f"relation {r} uses undeclared sort {s}"))
    labels: set[str] = set()
    for ax in t.axioms:
        if ax.label in labels:
            out.append(Diagnostic("duplicate axiom label", ax.label))
        labels.add(ax.label)
        scope: dict[str, Sort] = {}
        for v, s in ax.context:
            if v in scope:
                out.append(Diagnostic(f"duplicate context variable {v}", ax.label))
            if s not in seen_sorts:
                out.append(Diagnostic(f"undeclared sort {s}", ax.label))
            scope[v] = s
        out.extend(_check_formula(ax.premise, scope, t, ax.label, (0,)))
        out.extend(_check_formula(ax.conclusion, scope, t, ax.label, (1,)))
    return Report(tuple(out))


def free_variables(f: Formula) -> list[tuple[str, Sort]]:
    """Free variables with their sorts, in order of first occurrence."""
    out: dict[str, Sort] = {}

    def walk(g: Formula, bound: frozenset[str]) -> None:
        if isinstance(g, Atom):
            for v, s in zip(g.args, g.relation.signature):
                if v not in bound and v not in out:
                    out[v] = s
        elif isinstance(g, Eq):
            for v in (g.left, g.right):
                if v not in bound and v not in out:
                    out[v] = g.sort
        elif isinstance(g, Or):
            for h in g.disjuncts:
                walk(h, bound)
        elif isinstance(g, And):
            for h in g.conjuncts:
                walk(h, bound)
        elif isinstance(g, Exists):
            walk(g.body, bound | {g.var})

    walk(f, frozenset())
    return list(out.items())


def conj(*fs: Formula) -> Formula:
    """Conjunction that avoids wrapping a single conjunct."""
    if not fs:
        return TRUE
    if len(fs) == 1:
        return fs[0]
    return And(tuple(fs))
