"""Brute-force point semantics at a fixed truncation.

Points of the object locale are indexed models: for each sort a partial
equivalence relation on {0..k-1}, for each relation a set of index tuples
saturated under those PERs, satisfying the theory's axioms with quantifiers
ranging over self-related indices.  Points of the arrow locale are
isomorphisms between such models, given by a graph relation per sort.

Nothing here goes through the propositionalizer; formulas are evaluated
directly, so this module can act as an independent check on it.
"""
from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional

from .opens import PER, REL, Generator, Open
from .theory import And, Atom, Eq, Exists, Formula, Or, Theory, Top, validate_theory

DEFAULT_MAX_STRUCTURES = 10**7


class SizeGuardError(RuntimeError):
    pass


Classes = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class IndexedModel:
    k: int
    pers: tuple[tuple[str, Classes], ...]
    interp: tuple[tuple[str, frozenset], ...]

    @cached_property
    def classes(self) -> dict[str, Classes]:
        return dict(self.pers)

    @cached_property
    def relations(self) -> dict[str, frozenset]:
        return dict(self.interp)

    @cached_property
    def _class_of(self) -> dict[str, dict[int, int]]:
        return {s: {n: i for i, c in enumerate(cs) for n in c} for s, cs in self.pers}

    def domain(self, sort: str) -> list[int]:
        return sorted(self._class_of[sort])

    def related(self, sort: str, n: int, m: int) -> bool:
        cl = self._class_of[sort]
        return n in cl and m in cl and cl[n] == cl[m]

    def matrix(self, sort: str) -> tuple[tuple[bool, ...], ...]:
        return tuple(tuple(self.related(sort, n, m) for m in range(self.k))
                     for n in range(self.k))

    def class_index(self, sort: str, n: int) -> int:
        return self._class_of[sort][n]

    @cached_property
    def facts(self) -> frozenset[Generator]:
        """All object generators true in this model."""
        out = set()
        for s, cs in self.pers:
            for c in cs:
                out.update(Generator(PER, s, 0, (n, m)) for n in c for m in c)
        for r, tuples in self.interp:
            out.update(Generator(REL, r, 0, t) for t in tuples)
        return frozenset(out)

    def __str__(self) -> str:
        parts = [f"{s}: " + " ".join("{" + ",".join(map(str, c)) + "}" for c in cs)
                 for s, cs in self.pers]
        parts += [f"{r}: " + " ".join("(" + ",".join(map(str, t)) + ")" for t in sorted(ts))
                  for r, ts in self.interp]
        return "; ".join(parts)


# --- enumeration -------------------------------------------------------------

def _partitions(items: list[int]) -> Iterable[list[list[int]]]:
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for p in _partitions(rest):
        for i in range(len(p)):
            yield p[:i] + [[first] + p[i]] + p[i + 1:]
        yield [[first]] + p


def all_pers(k: int) -> list[Classes]:
    """Every PER on {0..k-1} as sorted class tuples, in row-major matrix order."""
    out = []
    for r in range(k + 1):
        for dom in itertools.combinations(range(k), r):
            for p in _partitions(list(dom)):
                out.append(tuple(sorted(tuple(sorted(c)) for c in p)))

    def matrix(cs: Classes) -> tuple[bool, ...]:
        cl = {n: i for i, c in enumerate(cs) for n in c}
        return tuple(n in cl and m in cl and cl[n] == cl[m] for n in range(k) for m in range(k))

    return sorted(out, key=matrix)


def _holds(f: Formula, m: IndexedModel, env: dict[str, int]) -> bool:
    if isinstance(f, Top):
        return True
    if isinstance(f, Or):
        return any(_holds(g, m, env) for g in f.disjuncts)
    if isinstance(f, And):
        return all(_holds(g, m, env) for g in f.conjuncts)
    if isinstance(f, Atom):
        return tuple(env[v] for v in f.args) in m.relations[f.relation.name]
    if isinstance(f, Eq):
        return m.related(f.sort.name, env[f.left], env[f.right])
    if isinstance(f, Exists):
        return any(_holds(f.body, m, {**env, f.var: n}) for n in m.domain(f.sort.name))
    raise TypeError(f)


def satisfies_theory(m: IndexedModel, t: Theory) -> bool:
    for ax in t.axioms:
        names = [v for v, _ in ax.context]
        doms = [m.domain(s.name) for _, s in ax.context]
        for ns in itertools.product(*doms):
            env = dict(zip(names, ns))
            if _holds(ax.premise, m, env) and not _holds(ax.conclusion, m, env):
                return False
    return True


def _class_tuples(r_sig: list[str], classes: dict[str, Classes]) -> list[tuple[int, ...]]:
    return list(itertools.product(*(range(len(classes[s])) for s in r_sig)))


def estimate_structures(t: Theory, k: int) -> int:
    """Number of PER-saturated structures the enumerator will visit."""
    pers = all_pers(k)
    counts: dict[int, int] = {}
    for cs in pers:
        counts[len(cs)] = counts.get(len(cs), 0) + 1
    total = 0
    sort_names = [s.name for s in t.sorts]
    for combo in itertools.product(sorted(counts), repeat=len(sort_names)):
        size = dict(zip(sort_names, combo))
        n = math.prod(counts[c] for c in combo)
        bits = sum(math.prod(size[s.name] for s in r.signature) for r in t.relations)
        total += n * 2 ** bits
    return total


def _guard(t: Theory, k: int, max_structures: Optional[int]) -> None:
    if max_structures is None:
        max_structures = int(os.environ.get("GFORGE_MAX_STRUCTURES", DEFAULT_MAX_STRUCTURES))
    est = estimate_structures(t, k)
    if est > max_structures:
        raise SizeGuardError(f"{est} candidate structures at k={k} exceeds the guard of "
                             f"{max_structures}; raise GFORGE_MAX_STRUCTURES or disable the guard")


def enumerate_models(t: Theory, k: int, max_structures: Optional[int] = None,
                     guard: bool = True) -> list[IndexedModel]:
    """All indexed models at truncation k, in canonical order."""
    k = getattr(k, "k", k)
    report = validate_theory(t)
    if not report.ok:
        raise ValueError(str(report))
    if guard:
        _guard(t, k, max_structures)
    pers = all_pers(k)
    sort_names = [s.name for s in t.sorts]
    out = []
    for combo in itertools.product(pers, repeat=len(sort_names)):
        classes = dict(zip(sort_names, combo))
        choices = []
        for r in t.relations:
            sig = [s.name for s in r.signature]
            cts = _class_tuples(sig, classes)
            options = []
            for mask in range(2 ** len(cts)):
                chosen = [ct for b, ct in enumerate(cts) if mask >> b & 1]
                tuples = frozenset(t_ for ct in chosen for t_ in
                                   itertools.product(*(classes[s][c] for s, c in zip(sig, ct))))
                options.append((r.name, tuples))
            choices.append(options)
        for interp in itertools.product(*choices):
            m = IndexedModel(k, tuple(zip(sort_names, combo)), tuple(interp))
            if satisfies_theory(m, t):
                out.append(m)
    return out


# --- isomorphisms ---------------------------------------------------------------

@dataclass(frozen=True)
class ModelIso:
    source: IndexedModel
    target: IndexedModel
    alpha: tuple[tuple[str, frozenset], ...]

    @cached_property
    def graph(self) -> dict[str, frozenset]:
        return dict(self.alpha)


def _class_image(m: IndexedModel, sig: list[str], tuples: frozenset) -> set:
    return {tuple(m.class_index(s, n) for s, n in zip(sig, t)) for t in tuples}


def enumerate_isos(a: IndexedModel, b: IndexedModel, t: Theory) -> list[ModelIso]:
    """All isomorphisms a -> b as saturated graph relations."""
    sort_names = [s.name for s in t.sorts]
    perms = []
    for s in sort_names:
        ca, cb = a.classes[s], b.classes[s]
        if len(ca) != len(cb):
            return []
        perms.append(list(itertools.permutations(range(len(cb)))))
    out = []
    for choice in itertools.product(*perms):
        sigma = dict(zip(sort_names, choice))
        ok = True
        for r in t.relations:
            sig = [s.name for s in r.signature]
            img = {tuple(sigma[s][c] for s, c in zip(sig, ct))
                   for ct in _class_image(a, sig, a.relations[r.name])}
            if img != _class_image(b, sig, b.relations[r.name]):
                ok = False
                break
        if not ok:
            continue
        alpha = tuple((s, frozenset((n, m) for i, c in enumerate(a.classes[s])
                                    for n in c for m in b.classes[s][sigma[s][i]]))
                      for s in sort_names)
        out.append(ModelIso(a, b, alpha))
    return out


def identity_iso(m: IndexedModel) -> ModelIso:
    alpha = tuple((s, frozenset((n, p) for c in cs for n in c for p in c)) for s, cs in m.pers)
    return ModelIso(m, m, alpha)


def invert_iso(f: ModelIso) -> ModelIso:
    return ModelIso(f.target, f.source,
                    tuple((s, frozenset((m, n) for n, m in g)) for s, g in f.alpha))


def compose_isos(f: ModelIso, g: ModelIso) -> ModelIso:
    """The iso ``g after f``; requires ``f.target == g.source``."""
    if f.target != g.source:
        raise ValueError("isomorphisms are not composable")
    alpha = []
    for s, rf in f.alpha:
        rg = g.graph[s]
        alpha.append((s, frozenset((n, p) for n, m in rf for m2, p in rg if m == m2)))
    return ModelIso(f.source, g.target, tuple(alpha))


def is_model_iso(f: ModelIso, t: Theory) -> bool:
    """Check the iso invariants directly on the graph relation."""
    a, b = f.source, f.target
    for s in (x.name for x in t.sorts):
        g = f.graph[s]
        da, db = set(a.domain(s)), set(b.domain(s))
        if any(n not in da or m not in db for n, m in g):
            return False
        for (n, m), (n2, m2) in itertools.product(g, repeat=2):
            if a.related(s, n, n2) != b.related(s, m, m2):
                return False
        if {n for n, _ in g} != da or {m for _, m in g} != db:
            return False
        for n, m in g:
            for n2, m2 in itertools.product(da, db):
                if a.related(s, n, n2) and b.related(s, m, m2) and (n2, m2) not in g:
                    return False
    for r in t.relations:
        sig = [s.name for s in r.signature]
        pairs = [sorted(f.graph[s]) for s in sig]
        for combo in itertools.product(*pairs):
            xs = tuple(p[0] for p in combo)
            ys = tuple(p[1] for p in combo)
            if (xs in a.relations[r.name]) != (ys in b.relations[r.name]):
                return False
    return True


# --- satisfaction -----------------------------------------------------------------

def _check_k(k: int, g: Generator) -> None:
    if any(a >= k or a < 0 for a in g.args):
        raise ValueError(f"generator {g} is outside the index set of size {k}")


def _object_fact(m: IndexedModel, g: Generator) -> bool:
    _check_k(m.k, g)
    if g.kind == PER:
        return m.related(g.symbol, *g.args)
    if g.kind == REL:
        return g.args in m.relations[g.symbol]
    raise ValueError(f"{g} is not an object generator")


def satisfies_object(m: IndexedModel, o: Open) -> bool:
    for t in o.terms:
        for g in t:
            if g.copy != 0:
                raise ValueError(f"{g} is not an object generator")
        if all(_object_fact(m, g) for g in t):
            return True
    return False


def _arrow_fact(f: ModelIso, g: Generator) -> bool:
    if g.kind == "alpha":
        _check_k(f.source.k, g)
        return g.args in f.graph[g.symbol]
    if g.copy == 1:
        return _object_fact(f.source, g.retag(0))
    if g.copy == 2:
        return _object_fact(f.target, g.retag(0))
    raise ValueError(f"{g} is not an arrow generator")


def satisfies_arrow(f: ModelIso, o: Open) -> bool:
    return any(all(_arrow_fact(f, g) for g in t) for t in o.terms)


def _pair_fact(f: ModelIso, h: ModelIso, g: Generator) -> bool:
    if g.kind == "beta":
        return g.args in f.graph[g.symbol]
    if g.kind == "gamma":
        return g.args in h.graph[g.symbol]
    model = {1: f.source, 2: f.target, 3: h.target}.get(g.copy)
    if model is None or g.kind not in (PER, REL):
        raise ValueError(f"{g} is not a composable-pair generator")
    return _object_fact(model, g.retag(0))


def satisfies_pair(f: ModelIso, h: ModelIso, o: Open) -> bool:
    return any(all(_pair_fact(f, h, g) for g in t) for t in o.terms)


def points(models: Iterable[IndexedModel], o: Open) -> frozenset[IndexedModel]:
    return frozenset(m for m in models if satisfies_object(m, o))


# --- the point groupoid ---------------------------------------------------------------

@dataclass
class PointGroupoid:
    theory: Theory
    models: list[IndexedModel]
    isos: list[ModelIso]
    identity: dict[int, int] = field(default_factory=dict)
    inverse: dict[int, int] = field(default_factory=dict)
    composition: dict[tuple[int, int], int] = field(default_factory=dict)

    @classmethod
    def build(cls, t: Theory, k: int, **guard) -> "PointGroupoid":
        models = enumerate_models(t, k, **guard)
        isos = [f for a in models for b in models for f in enumerate_isos(a, b, t)]
        pg = cls(t, models, isos)
        pg._tabulate()
        return pg

    def _tabulate(self) -> None:
        self.model_index = {m: i for i, m in enumerate(self.models)}
        self.iso_index = {f: i for i, f in enumerate(self.isos)}
        self.source = [self.model_index[f.source] for f in self.isos]
        self.target = [self.model_index[f.target] for f in self.isos]
        self.out_of: dict[int, list[int]] = {i: [] for i in range(len(self.models))}
        for j, s in enumerate(self.source):
            self.out_of[s].append(j)
        # Results missing from the enumerated isos map to -1 and show up as law violations.
        for i, m in enumerate(self.models):
            self.identity[i] = self.iso_index.get(identity_iso(m), -1)
        for j, f in enumerate(self.isos):
            self.inverse[j] = self.iso_index.get(invert_iso(f), -1)
        for j, f in enumerate(self.isos):
            for l in self.out_of[self.target[j]]:
                self.composition[(j, l)] = self.iso_index.get(compose_isos(f, self.isos[l]), -1)

    def composable_pairs(self) -> list[tuple[int, int]]:
        return list(self.composition)

    def points(self, o: Open) -> frozenset[IndexedModel]:
        return points(self.models, o)

    def arrow_points(self, o: Open) -> list[int]:
        return [j for j, f in enumerate(self.isos) if satisfies_arrow(f, o)]

    def image_under_source(self, o: Open) -> frozenset[IndexedModel]:
        return frozenset(self.isos[j].source for j in self.arrow_points(o))

    def image_under_target(self, o: Open) -> frozenset[IndexedModel]:
        return frozenset(self.isos[j].target for j in self.arrow_points(o))

    def orbit_saturate(self, ms: Iterable[IndexedModel]) -> frozenset[IndexedModel]:
        out = set()
        for m in ms:
            for j in self.out_of[self.model_index[m]]:
                out.add(self.isos[j].target)
        return frozenset(out)

    def open_hull(self, ms: Iterable[IndexedModel]) -> frozenset[IndexedModel]:
        """Smallest open set of models containing ``ms``.

        At a finite truncation the opens are exactly the up-sets of the
        specialization order, where M <= M' iff every generator true in M
        is true in M'.
        """
        ms = list(ms)
        return frozenset(n for n in self.models if any(m.facts <= n.facts for m in ms))


@dataclass
class LawReport:
    violations: dict[str, list] = field(default_factory=dict)
    checked: dict[str, int] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not any(self.violations.values())

    def to_json(self) -> dict:
        return {"ok": self.ok, "checked": self.checked,
                "violations": {k: [list(map(int, v)) if isinstance(v, tuple) else v
                                   for v in vs[:10]] for k, vs in self.violations.items()}}


def verify_groupoid_laws(pg: PointGroupoid) -> LawReport:
    """Check the seven groupoid equation families pointwise."""
    rep = LawReport()
    fam = {name: [] for name in ("identity_section", "composite_ends", "associativity",
                                 "unit", "inverse_ends", "inverse_composite", "involution")}
    counts = dict.fromkeys(fam, 0)
    e, inv, comp = pg.identity, pg.inverse, pg.composition
    for x in range(len(pg.models)):
        counts["identity_section"] += 1
        j = e[x]
        if j < 0 or pg.source[j] != x or pg.target[j] != x:
            fam["identity_section"].append((x,))
    for (f, g), h in comp.items():
        counts["composite_ends"] += 1
        if h < 0 or pg.source[h] != pg.source[f] or pg.target[h] != pg.target[g]:
            fam["composite_ends"].append((f, g))
    for (f, g), fg in comp.items():
        for h in pg.out_of[pg.target[g]]:
            counts["associativity"] += 1
            gh = comp.get((g, h), -1)
            left = comp.get((f, gh), -1) if gh >= 0 else -1
            right = comp.get((fg, h), -1) if fg >= 0 else -1
            if left < 0 or left != right:
                fam["associativity"].append((f, g, h))
    for f in range(len(pg.isos)):
        counts["unit"] += 1
        counts["inverse_ends"] += 1
        counts["inverse_composite"] += 1
        counts["involution"] += 1
        s, t = pg.source[f], pg.target[f]
        if comp.get((f, e[t]), -1) != f or comp.get((e[s], f), -1) != f:
            fam["unit"].append((f,))
        i = inv[f]
        if i < 0 or pg.source[i] != t or pg.target[i] != s:
            fam["inverse_ends"].append((f,))
            fam["inverse_composite"].append((f,))
            fam["involution"].append((f,))
            continue
        if comp.get((f, i), -1) != e[s] or comp.get((i, f), -1) != e[t]:
            fam["inverse_composite"].append((f,))
        if inv[i] != f:
            fam["involution"].append((f,))
    rep.violations = fam
    rep.checked = counts
    return rep
