"""Verification suites tying the symbolic groupoid to the point oracle.

Each check returns a ``CheckResult``; counterexamples are kept as strings so
reports serialize directly to JSON.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .groupoid import GroupoidPresentation, apply_map
from .opens import Generator, Open, join, meet
from .oracle import (PointGroupoid, satisfies_arrow, satisfies_object, satisfies_pair,
                     verify_groupoid_laws)

MAX_EXAMPLES = 5


@dataclass
class CheckResult:
    name: str
    checked: int = 0
    failures: list[str] = field(default_factory=list)
    failure_count: int = 0
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.failure_count == 0

    def fail(self, msg: str) -> None:
        self.failure_count += 1
        if len(self.failures) < MAX_EXAMPLES:
            self.failures.append(msg)

    def to_json(self) -> dict:
        out = {"name": self.name, "passed": self.passed, "checked": self.checked,
               "failures": self.failure_count, "counterexamples": self.failures}
        if self.note:
            out["note"] = self.note
        return out


def arrow_basics(G: GroupoidPresentation, max_arity: int = 2,
                 sample_triples: int = 0, seed: int = 0) -> list[Open]:
    """Every arrow basic open of at most ``max_arity`` generators, plus sampled triples."""
    gens = G.arrows.generators
    out = []
    for r in range(1, max_arity + 1):
        out.extend(Open.basic(c) for c in itertools.combinations(gens, r))
    if sample_triples:
        rng = random.Random(seed)
        for _ in range(sample_triples):
            out.append(Open.basic(rng.sample(gens, 3)))
    return out


def object_opens(G: GroupoidPresentation, max_gens: int = 2) -> list[Open]:
    """Object opens built from at most ``max_gens`` generators (meets and joins)."""
    gens = G.objects.generators
    out = [Open.gen(g) for g in gens]
    if max_gens >= 2:
        for a, b in itertools.combinations(gens, 2):
            out.append(Open.basic([a, b]))
            out.append(join(Open.gen(a), Open.gen(b)))
    return out


def random_open(gens: Sequence[Generator], rng: random.Random,
                max_terms: int = 2, max_meet: int = 2) -> Open:
    terms = [rng.sample(gens, rng.randint(1, max_meet)) for _ in range(rng.randint(1, max_terms))]
    return Open.of(terms)


# --- syntactic ------------------------------------------------------------------------

def check_section_laws(G: GroupoidPresentation) -> CheckResult:
    res = CheckResult("section: e* after s* and e* after t* fix object generators")
    for g in G.objects.generators:
        u = Open.gen(g)
        for name, m in (("s*", G.s_star), ("t*", G.t_star)):
            res.checked += 1
            got = apply_map(G.e_star, apply_map(m, u))
            if got != u:
                res.fail(f"e*({name}({g})) = {got}")
    return res


def check_involution(G: GroupoidPresentation) -> CheckResult:
    res = CheckResult("involution: i* after i* fixes arrow generators")
    for g in G.arrows.generators:
        res.checked += 1
        u = Open.gen(g)
        got = apply_map(G.i_star, apply_map(G.i_star, u))
        if got != u:
            res.fail(f"i*(i*({g})) = {got}")
    return res


def check_retraction(G: GroupoidPresentation) -> CheckResult:
    res = CheckResult("retraction: s_!(s*(g)) = g on object generators (syntactic)")
    for g in G.objects.generators:
        res.checked += 1
        got = G.source_lower(G.s_star(Open.gen(g)))
        if got != Open.gen(g):
            res.fail(f"s_!(s*({g})) = {got}")
    return res


def check_frobenius_syntactic(G: GroupoidPresentation) -> CheckResult:
    res = CheckResult("frobenius: s_!(s*(u) & v) = u & s_!(v), generators (syntactic)")
    for u in G.objects.generators:
        uo = Open.gen(u)
        su = G.s_star(uo)
        for v in G.arrows.generators:
            res.checked += 1
            vo = Open.gen(v)
            left = G.source_lower(meet(su, vo))
            right = meet(uo, G.source_lower(vo))
            if left != right:
                res.fail(f"u={u}, v={v}: {left} != {right}")
    return res


# --- semantic -------------------------------------------------------------------------

def check_retraction_semantic(G: GroupoidPresentation, pg: PointGroupoid,
                              n: int = 200, seed: int = 0) -> CheckResult:
    res = CheckResult("retraction: s_!(s*(u)) = u on random object opens (semantic)")
    rng = random.Random(seed)
    for _ in range(n):
        u = random_open(G.objects.generators, rng, 3, 2)
        res.checked += 1
        if pg.points(G.source_lower(G.s_star(u))) != pg.points(u):
            res.fail(f"u={u}")
    return res


def check_unit(G: GroupoidPresentation, pg: PointGroupoid, basics: Iterable[Open]) -> CheckResult:
    res = CheckResult("unit: b <= s*(s_!(b)) on arrow basic opens (semantic)")
    for b in basics:
        res.checked += 1
        up = G.s_star(G.source_lower(b))
        for j in pg.arrow_points(b):
            if not satisfies_arrow(pg.isos[j], up):
                res.fail(f"b={b}, iso #{j}")
                break
    return res


def check_frobenius_semantic(G: GroupoidPresentation, pg: PointGroupoid,
                             n: int = 1000, seed: int = 0) -> CheckResult:
    res = CheckResult(f"frobenius: {n} seeded random open pairs (semantic)")
    rng = random.Random(seed)
    for _ in range(n):
        u = random_open(G.objects.generators, rng)
        v = random_open(G.arrows.generators, rng)
        res.checked += 1
        left = G.source_lower(meet(G.s_star(u), v))
        right = meet(u, G.source_lower(v))
        if pg.points(left) != pg.points(right):
            res.fail(f"u={u}, v={v}")
    return res


def check_adjunction_image(G: GroupoidPresentation, pg: PointGroupoid,
                           basics: Iterable[Open]) -> CheckResult:
    res = CheckResult("adjunction: points(s_!(b)) = s-image(points(b))")
    for b in basics:
        res.checked += 1
        pts = pg.points(G.source_lower(b))
        img = pg.image_under_source(b)
        if pts != img:
            res.fail(f"b={b}: {len(pts)} models satisfy s_!(b), image has {len(img)}")
    return res


def check_adjunction_hull(G: GroupoidPresentation, pg: PointGroupoid,
                          basics: Iterable[Open]) -> CheckResult:
    res = CheckResult("adjunction: points(s_!(b)) = smallest open containing s-image(points(b))")
    for b in basics:
        res.checked += 1
        pts = pg.points(G.source_lower(b))
        hull = pg.open_hull(pg.image_under_source(b))
        if pts != hull:
            extra = sorted(map(str, pts - hull))[:1]
            res.fail(f"b={b}: {len(pts)} vs {len(hull)} models, e.g. {extra}")
    return res


def check_target_hull(G: GroupoidPresentation, pg: PointGroupoid,
                      basics: Iterable[Open]) -> CheckResult:
    res = CheckResult("adjunction: points(t_!(b)) = smallest open containing t-image(points(b))")
    for b in basics:
        res.checked += 1
        if pg.points(G.target_lower(b)) != pg.open_hull(pg.image_under_target(b)):
            res.fail(f"b={b}")
    return res


def check_well_definedness(G: GroupoidPresentation, pg: PointGroupoid,
                           samples: int = 20, seed: int = 0) -> CheckResult:
    """Coverage obligations: s_!(g & lhs) <= s_!(g & rhs) for every arrow relation."""
    res = CheckResult("well-definedness: s_! respects every arrow relation met with sampled g")
    rng = random.Random(seed)
    gens = G.arrows.generators
    gs = [Open.basic(())] + [Open.basic(rng.sample(gens, rng.randint(1, 2))) for _ in range(samples)]
    cache: dict[Open, frozenset] = {}

    def pts(o: Open) -> frozenset:
        if o not in cache:
            cache[o] = pg.points(G.source_lower(o))
        return cache[o]

    for ineq in G.arrows.inequalities:
        for g in gs:
            res.checked += 1
            if not pts(meet(g, ineq.lhs)) <= pts(meet(g, ineq.rhs)):
                res.fail(f"g={g}: {ineq}")
    return res


def check_closure_orbit(G: GroupoidPresentation, pg: PointGroupoid,
                        opens: Iterable[Open]) -> CheckResult:
    res = CheckResult("closure: points(s_!t*(u)) = orbit of points(u)")
    for u in opens:
        res.checked += 1
        got = pg.points(G.closure(u))
        orbit = pg.orbit_saturate(pg.points(u))
        if got != orbit:
            res.fail(f"u={u}: {len(got)} models vs orbit of {len(orbit)}")
    return res


def check_closure_hull(G: GroupoidPresentation, pg: PointGroupoid,
                       opens: Iterable[Open]) -> CheckResult:
    res = CheckResult("closure: points(s_!t*(u)) = smallest open containing the orbit of points(u)")
    for u in opens:
        res.checked += 1
        if pg.points(G.closure(u)) != pg.open_hull(pg.orbit_saturate(pg.points(u))):
            res.fail(f"u={u}")
    return res


def check_closure_operator(G: GroupoidPresentation, pg: PointGroupoid,
                           opens: Sequence[Open]) -> CheckResult:
    res = CheckResult("closure: inflationary, idempotent and monotone (semantic)")
    pts = {}
    for u in opens:
        res.checked += 1
        c = G.closure(u)
        pu, pc = pg.points(u), pg.points(c)
        pts[u] = (pu, pc)
        if not pu <= pc:
            res.fail(f"not inflationary at u={u}")
        if pg.points(G.closure(c)) != pc:
            res.fail(f"not idempotent at u={u}")
    items = list(pts.values())
    for (pu, pc), (pv, pd) in itertools.product(items[:60], repeat=2):
        if pu <= pv and not pc <= pd:
            res.fail("not monotone")
    return res


def check_functoriality(G: GroupoidPresentation, pg: PointGroupoid) -> CheckResult:
    """s*, t*, e*, i* agree with preimage along the point maps."""
    res = CheckResult("functoriality: s*, t*, e*, i* act as preimages on points")
    ident = {pg.models[i]: pg.isos[j] for i, j in pg.identity.items() if j >= 0}
    for g in G.objects.generators:
        u = Open.gen(g)
        su, tu = G.s_star(u), G.t_star(u)
        for f in pg.isos:
            res.checked += 2
            if satisfies_arrow(f, su) != satisfies_object(f.source, u):
                res.fail(f"s*({g}) at an iso")
            if satisfies_arrow(f, tu) != satisfies_object(f.target, u):
                res.fail(f"t*({g}) at an iso")
    for g in G.arrows.generators:
        v = Open.gen(g)
        ev, iv = G.e_star(v), G.i_star(v)
        for m in pg.models:
            res.checked += 1
            if satisfies_object(m, ev) != satisfies_arrow(ident[m], v):
                res.fail(f"e*({g}) at {m}")
        for j, f in enumerate(pg.isos):
            res.checked += 1
            if satisfies_arrow(f, iv) != satisfies_arrow(pg.isos[pg.inverse[j]], v):
                res.fail(f"i*({g}) at iso #{j}")
    return res


def check_composition_agreement(G: GroupoidPresentation, pg: PointGroupoid) -> CheckResult:
    """m*, pi1*, pi2* agree with composition and projections on composable pairs."""
    res = CheckResult(f"composition: m* ({G.composition} form) agrees with composing isos")
    images = [(g, G.m_star(Open.gen(g)), G.pi1_star(Open.gen(g)), G.pi2_star(Open.gen(g)))
              for g in G.arrows.generators]
    for (a, b), c in pg.composition.items():
        f, h, fh = pg.isos[a], pg.isos[b], pg.isos[c]
        for g, m, p1, p2 in images:
            res.checked += 1
            v = Open.gen(g)
            if satisfies_pair(f, h, m) != satisfies_arrow(fh, v):
                res.fail(f"m*({g}) at pair (#{a}, #{b}): pair gives "
                         f"{satisfies_pair(f, h, m)}, composite gives {satisfies_arrow(fh, v)}")
            if satisfies_pair(f, h, p1) != satisfies_arrow(f, v):
                res.fail(f"pi1*({g}) at pair (#{a}, #{b})")
            if satisfies_pair(f, h, p2) != satisfies_arrow(h, v):
                res.fail(f"pi2*({g}) at pair (#{a}, #{b})")
    return res


def check_groupoid_laws(pg: PointGroupoid) -> CheckResult:
    rep = verify_groupoid_laws(pg)
    res = CheckResult("groupoid laws: seven equation families on the point groupoid")
    res.checked = sum(rep.checked.values())
    for fam, vs in rep.violations.items():
        for v in vs:
            res.fail(f"{fam}: {v}")
    return res


def check_soundness(G: GroupoidPresentation, pg: PointGroupoid) -> CheckResult:
    res = CheckResult("soundness: every point satisfies every presented inequality")
    for ineq in G.objects.inequalities:
        for m in pg.models:
            res.checked += 1
            if satisfies_object(m, ineq.lhs) and not satisfies_object(m, ineq.rhs):
                res.fail(f"{m} violates {ineq}")
    for ineq in G.arrows.inequalities:
        for f in pg.isos:
            res.checked += 1
            if satisfies_arrow(f, ineq.lhs) and not satisfies_arrow(f, ineq.rhs):
                res.fail(f"iso violates {ineq}")
    return res


def check_propositional_degeneration(G: GroupoidPresentation) -> CheckResult:
    """For a propositional theory the groupoid is categorically discrete.

    The copies R1, R2 (and R3) are identified by the preservation axioms;
    collapsing copy tags must then turn the arrow and composable-pair
    presentations back into the object presentation, and every structure
    map must become the identity.
    """
    res = CheckResult("propositional degeneration: all structure maps are identities")
    if G.theory.sorts:
        res.fail("theory has sorts")
        return res

    def collapse(o: Open) -> Open:
        return Open.of([g.retag(0) for g in t] for t in o.terms)

    objs = set(G.objects.generators)
    for pres in (G.arrows, G.comp):
        res.checked += 1
        if {g.retag(0) for g in pres.generators} != objs:
            res.fail(f"{pres.provenance}: generators do not collapse onto the object generators")
        copies = sorted({g.copy for g in pres.generators})
        links = set()
        for ineq in pres.inequalities:
            lg, rg = ineq.lhs.generators(), ineq.rhs.generators()
            if len(ineq.lhs.terms) == 1 and len(ineq.rhs.terms) == 1 and len(lg) == len(rg) == 1:
                (a,), (b,) = lg, rg
                if a.retag(0) == b.retag(0) and a.copy != b.copy:
                    links.add((a, b))
        for g in G.objects.generators:
            for a, b in zip(copies, copies[1:]):
                res.checked += 1
                ga, gb = g.retag(a), g.retag(b)
                if (ga, gb) not in links or (gb, ga) not in links:
                    res.fail(f"{pres.provenance}: {ga} and {gb} are not identified")
        collapsed = set()
        for ineq in pres.inequalities:
            lhs, rhs = collapse(ineq.lhs), collapse(ineq.rhs)
            if lhs != rhs:
                collapsed.add((lhs, rhs))
        expected = {(i.lhs, i.rhs) for i in G.objects.inequalities}
        res.checked += 1
        if collapsed != expected:
            res.fail(f"{pres.provenance}: collapsed relations differ from the object relations")
    for name, m in (("s*", G.s_star), ("t*", G.t_star), ("e*", G.e_star), ("i*", G.i_star),
                    ("m*", G.m_star), ("pi1*", G.pi1_star), ("pi2*", G.pi2_star)):
        for g, img in m.images.items():
            res.checked += 1
            if collapse(img) != Open.gen(g.retag(0)):
                res.fail(f"{name}({g}) = {img}")
    return res


SUITES = ("laws", "adjunction", "frobenius", "closure")


def run_suite(name: str, G: GroupoidPresentation, pg: PointGroupoid,
              max_arity: int = 2, seed: int = 0, samples: int = 1000) -> list[CheckResult]:
    if name == "laws":
        out = [check_section_laws(G), check_involution(G), check_groupoid_laws(pg),
               check_functoriality(G, pg), check_composition_agreement(G, pg)]
        if not G.theory.sorts:
            out.append(check_propositional_degeneration(G))
        return out
    if name == "adjunction":
        basics = arrow_basics(G, max_arity)
        exact = check_adjunction_image(G, pg, basics)
        exact.note = ("informational: at a finite truncation the image of an open need not "
                      "be open; the hull check below is the adjointness test")
        return [check_retraction(G), check_retraction_semantic(G, pg, seed=seed),
                check_unit(G, pg, basics), check_adjunction_hull(G, pg, basics),
                check_target_hull(G, pg, basics), exact]
    if name == "frobenius":
        return [check_frobenius_syntactic(G), check_frobenius_semantic(G, pg, samples, seed)]
    if name == "closure":
        opens = object_opens(G, max_arity)
        orbit = check_closure_orbit(G, pg, opens)
        orbit.note = "informational: the orbit of an open need not be open at a finite truncation"
        return [check_closure_hull(G, pg, opens), check_closure_operator(G, pg, opens), orbit]
    raise ValueError(f"unknown suite {name!r}")


def informational(r: CheckResult) -> bool:
    return r.note.startswith("informational")
