"""Seeded random generation of well-formed theories, for round-trip testing."""
from __future__ import annotations

import random
from typing import Optional

from .theory import FALSE, TRUE, And, Atom, Eq, Exists, Formula, Or, Relation, Sequent, Sort, Theory


def random_formula(rng: random.Random, relations: list[Relation], sorts: list[Sort],
                   scope: dict[str, Sort], depth: int, fresh: list[int]) -> Formula:
    choice = rng.random()
    if depth <= 0 or choice < 0.35:
        return _leaf(rng, relations, scope)
    if choice < 0.6:
        parts = tuple(random_formula(rng, relations, sorts, scope, depth - 1, fresh)
                      for _ in range(rng.randint(2, 3)))
        return And(parts)
    if choice < 0.85 or not sorts:
        parts = tuple(random_formula(rng, relations, sorts, scope, depth - 1, fresh)
                      for _ in range(rng.randint(2, 3)))
        return Or(parts)
    fresh[0] += 1
    var = f"v{fresh[0]}"
    s = rng.choice(sorts)
    return Exists(var, s, random_formula(rng, relations, sorts, {**scope, var: s},
                                         depth - 1, fresh))


def _leaf(rng: random.Random, relations: list[Relation], scope: dict[str, Sort]) -> Formula:
    usable = [r for r in relations
              if all(any(s == t for t in scope.values()) for s in r.signature)]
    by_sort: dict[Sort, list[str]] = {}
    for v, s in scope.items():
        by_sort.setdefault(s, []).append(v)
    roll = rng.random()
    if roll < 0.08:
        return TRUE
    if roll < 0.14:
        return FALSE
    if roll < 0.3 and by_sort:
        s = rng.choice(sorted(by_sort))
        return Eq(s, rng.choice(by_sort[s]), rng.choice(by_sort[s]))
    if not usable:
        return TRUE
    r = rng.choice(usable)
    return Atom(r, tuple(rng.choice(by_sort[s]) for s in r.signature))


def random_theory(rng: random.Random, name: Optional[str] = None, max_sorts: int = 3,
                  max_relations: int = 4, max_axioms: int = 4, depth: int = 3) -> Theory:
    sorts = [Sort(f"S{i}") for i in range(rng.randint(0, max_sorts))]
    relations = []
    for i in range(rng.randint(0, max_relations)):
        arity = rng.randint(0, 3) if sorts else 0
        relations.append(Relation(f"r{i}", tuple(rng.choice(sorts) for _ in range(arity))))
    axioms = []
    for i in range(rng.randint(0, max_axioms)):
        context = tuple((f"x{j}", rng.choice(sorts)) for j in range(rng.randint(0, 3))) if sorts else ()
        scope = dict(context)
        fresh = [0]
        axioms.append(Sequent(
            f"ax{i}", context,
            random_formula(rng, relations, sorts, scope, depth, fresh),
            random_formula(rng, relations, sorts, scope, depth, fresh)))
    if name is None:
        name = rng.choice(["", f"t{rng.randrange(1000)}"])
    return Theory(name, tuple(sorts), tuple(relations), tuple(axioms))
