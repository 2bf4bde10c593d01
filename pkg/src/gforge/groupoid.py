"""The syntactic localic groupoid at a finite index truncation.

Object, arrow and composable-pair presentations, the five structure maps
as generator maps, the left adjoint ``source_lower`` of the source map, its
mirror ``target_lower``, and the orbit closure ``closure`` (source_lower
after the target map).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Union

from .opens import PER, Generator, Open, join_all, meet_all, normalize
from .propositional import (FramePresentation, double_iso_expansion, iso_expansion,
                            propositionalize, _as_k)
from .theory import Theory

COMPOSITION_FORMS = ("relational", "literal")


class MapError(KeyError):
    pass


@dataclass(frozen=True, eq=False)
class GeneratorMap:
    name: str
    domain: FramePresentation
    codomain: FramePresentation
    images: Mapping[Generator, Open]

    def __call__(self, o: Open) -> Open:
        return apply_map(self, o)


def apply_map(m: GeneratorMap, o: Open) -> Open:
    """Frame homomorphism extension: substitute, distribute, normalize."""
    terms = []
    for t in o.terms:
        try:
            parts = [m.images[g] for g in t]
        except KeyError as e:
            raise MapError(f"{m.name}: no image for generator {e.args[0]}") from None
        terms.extend(meet_all(parts).terms)
    return normalize(terms)


def _map(name: str, dom: FramePresentation, cod: FramePresentation, f) -> GeneratorMap:
    images = {g: f(g) for g in dom.generators}
    return GeneratorMap(name, dom, cod, images)


def _gen(g: Generator) -> Open:
    return Open.gen(g)


BasicLike = Union[Open, Iterable[Generator]]


@dataclass(frozen=True, eq=False)
class GroupoidPresentation:
    theory: Theory
    k: int
    objects: FramePresentation
    arrows: FramePresentation
    comp: FramePresentation
    s_star: GeneratorMap
    t_star: GeneratorMap
    e_star: GeneratorMap
    i_star: GeneratorMap
    m_star: GeneratorMap
    pi1_star: GeneratorMap
    pi2_star: GeneratorMap
    composition: str = "relational"

    # -- left adjoints --
    def _basic_terms(self, b: BasicLike) -> list[tuple[Generator, ...]]:
        o = b if isinstance(b, Open) else Open.basic(b)
        missing = o.generators() - self.arrows.generator_set
        if missing:
            raise ValueError(f"not over the arrows presentation: {sorted(map(str, missing))}")
        return list(o.terms)

    def _lower_basic(self, term: tuple[Generator, ...]) -> Open:
        domain: list[Generator] = []
        coded: list[tuple[Generator, list[tuple[int, str]]]] = []
        isos: list[tuple[str, int, int]] = []
        var: dict[tuple[int, str], int] = {}

        def slot(n: int, sort: str) -> int:
            return var.setdefault((n, sort), len(var))

        for g in term:
            if g.kind == "alpha":
                c, d = g.args
                isos.append((g.symbol, c, slot(d, g.symbol)))
            elif g.copy == 1:
                domain.append(g.retag(0))
            else:
                sorts = [s.name for s in self.arrows.position_sorts(g)]
                coded.append((g, [slot(a, s) for a, s in zip(g.args, sorts)]))
        out = []
        for ys in itertools.product(range(self.k), repeat=len(var)):
            t = list(domain)
            for g, slots in coded:
                t.append(Generator(g.kind, g.symbol, 0, tuple(ys[i] for i in slots)))
            for sort, c, i in isos:
                t.append(Generator(PER, sort, 0, (c, ys[i])))
            out.append(t)
        return normalize(out)

    def source_lower(self, b: BasicLike) -> Open:
        """Left adjoint of the source frame map, on a basic open or any open."""
        return join_all(self._lower_basic(t) for t in self._basic_terms(b))

    def target_lower(self, b: BasicLike) -> Open:
        terms = self._basic_terms(b)
        return join_all(self._lower_basic(self.i_star(Open((t,))).terms[0]) for t in terms)

    def closure(self, u: Open) -> Open:
        if not self.objects.owns(u):
            raise ValueError("not over the objects presentation")
        return self.source_lower(self.t_star(u))


def build_groupoid(t: Theory, idx, composition: str = "relational") -> GroupoidPresentation:
    """Assemble the three presentations and the structure maps.

    ``composition='literal'`` uses ``[beta(n)=p] & [gamma(m)=p]`` joined over m,
    which is kept only as a regression target; the default composes the two
    graph relations.
    """
    if composition not in COMPOSITION_FORMS:
        raise ValueError(f"composition must be one of {COMPOSITION_FORMS}")
    k = _as_k(idx)
    objects = propositionalize(t, k, "objects")
    arrows = propositionalize(iso_expansion(t), k, "arrows")
    comp = propositionalize(double_iso_expansion(t), k, "composition-domain")

    s_star = _map("s*", objects, arrows, lambda g: _gen(g.retag(1)))
    t_star = _map("t*", objects, arrows, lambda g: _gen(g.retag(2)))

    def e(g: Generator) -> Open:
        if g.kind == "alpha":
            return _gen(Generator(PER, g.symbol, 0, g.args))
        return _gen(g.retag(0))

    def i(g: Generator) -> Open:
        if g.kind == "alpha":
            return _gen(Generator("alpha", g.symbol, 0, g.args[::-1]))
        return _gen(g.retag(3 - g.copy))

    def m(g: Generator) -> Open:
        if g.kind == "alpha":
            n, p = g.args
            if composition == "relational":
                terms = [[Generator("beta", g.symbol, 0, (n, q)),
                          Generator("gamma", g.symbol, 0, (q, p))] for q in range(k)]
            else:
                terms = [[Generator("beta", g.symbol, 0, (n, p)),
                          Generator("gamma", g.symbol, 0, (q, p))] for q in range(k)]
            return normalize(terms)
        return _gen(g.retag(1 if g.copy == 1 else 3))

    def projection(shift: int, tag: str):
        def f(g: Generator) -> Open:
            if g.kind == "alpha":
                return _gen(Generator(tag, g.symbol, 0, g.args))
            return _gen(g.retag(g.copy + shift))
        return f

    return GroupoidPresentation(
        t, k, objects, arrows, comp, s_star, t_star,
        _map("e*", arrows, objects, e),
        _map("i*", arrows, arrows, i),
        _map("m*", arrows, comp, m),
        _map("pi1*", arrows, comp, projection(0, "beta")),
        _map("pi2*", arrows, comp, projection(1, "gamma")),
        composition,
    )


def is_closure_fixed(g: GroupoidPresentation, u: Open, models=None) -> bool:
    """Semantic fixed-point test for the closure, decided on enumerated models."""
    from .oracle import enumerate_models, points

    if models is None:
        models = enumerate_models(g.theory, g.k)
    return points(models, g.closure(u)) == points(models, u)
