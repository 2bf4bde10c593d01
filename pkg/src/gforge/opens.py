"""Generators and opens in join-of-meets normal form."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

PER, REL = "per", "rel"
ISO_KINDS = ("alpha", "beta", "gamma")


@dataclass(frozen=True, order=True)
class Generator:
    """A generator of a presented frame.

    ``kind`` is ``per`` for ``[n ~ m]`` (``symbol`` is the sort), ``rel`` for
    ``[n in R]``, or an iso tag for ``[iso^X(n) = m]`` (``symbol`` is X).
    ``copy`` is 0 for the object presentation and 1-3 for tagged copies.
    """

    kind: str
    symbol: str
    copy: int
    args: tuple[int, ...]

    def __str__(self) -> str:
        tag = str(self.copy) if self.copy else ""
        if self.kind == PER:
            return f"per{tag}.{self.symbol}({','.join(map(str, self.args))})"
        if self.kind == REL:
            return f"{self.symbol}{tag}({','.join(map(str, self.args))})"
        n, m = self.args
        return f"{self.kind}.{self.symbol}({n})={m}"

    def retag(self, copy: int) -> "Generator":
        return Generator(self.kind, self.symbol, copy, self.args)

    def to_json(self) -> dict:
        return {"kind": self.kind, "symbol": self.symbol, "copy": self.copy,
                "args": list(self.args)}


def per(sort: str, n: int, m: int, copy: int = 0) -> Generator:
    return Generator(PER, sort, copy, (n, m))


def rel(name: str, *args: int, copy: int = 0) -> Generator:
    return Generator(REL, name, copy, tuple(args))


def iso(tag: str, sort: str, n: int, m: int) -> Generator:
    return Generator(tag, sort, 0, (n, m))


class MixedPresentationError(ValueError):
    pass


def _layer(g: Generator) -> str | None:
    if g.kind == "alpha":
        return "arrows"
    if g.kind in ("beta", "gamma") or g.copy == 3:
        return "comp"
    if g.copy == 0:
        return "objects"
    return None  # copies 1 and 2 occur in both arrows and comp


BasicOpen = frozenset  # frozenset[Generator], read as a meet


@dataclass(frozen=True)
class Open:
    """A join of basic opens; ``terms`` is canonical (sorted antichain)."""

    terms: tuple[tuple[Generator, ...], ...]

    @classmethod
    def of(cls, terms: Iterable[Iterable[Generator]]) -> "Open":
        return normalize(terms)

    @classmethod
    def gen(cls, g: Generator) -> "Open":
        return cls(((g,),))

    @classmethod
    def basic(cls, gens: Iterable[Generator]) -> "Open":
        return normalize([gens])

    @property
    def is_top(self) -> bool:
        return self.terms == ((),)

    @property
    def is_bottom(self) -> bool:
        return not self.terms

    def basics(self) -> list[frozenset]:
        return [frozenset(t) for t in self.terms]

    def generators(self) -> set[Generator]:
        return {g for t in self.terms for g in t}

    def __and__(self, other: "Open") -> "Open":
        return meet(self, other)

    def __or__(self, other: "Open") -> "Open":
        return join(self, other)

    def __str__(self) -> str:
        if self.is_bottom:
            return "false"
        if self.is_top:
            return "true"
        parts = []
        for t in self.terms:
            body = " & ".join(map(str, t)) if t else "true"
            parts.append(f"({body})" if len(t) > 1 and len(self.terms) > 1 else body)
        return " | ".join(parts)

    def to_json(self, index: dict[Generator, int]) -> list[list[int]]:
        return [[index[g] for g in t] for t in self.terms]


TOP = Open(((),))
BOTTOM = Open(())


def normalize(terms: Iterable[Iterable[Generator]]) -> Open:
    """Deduplicate, drop subsumed meets, and order canonically."""
    sets = {frozenset(t) for t in terms}
    layers = {_layer(g) for t in sets for g in t} - {None}
    if len(layers) > 1:
        raise MixedPresentationError(f"generators from several presentations: {sorted(layers)}")
    if frozenset() in sets:
        return TOP
    kept: list[frozenset] = []
    for s in sorted(sets, key=len):
        if not any(k <= s for k in kept):
            kept.append(s)
    return Open(tuple(sorted(tuple(sorted(s)) for s in kept)))


def join(a: Open, b: Open) -> Open:
    return normalize(a.terms + b.terms)


def meet(a: Open, b: Open) -> Open:
    return normalize(x + y for x in a.terms for y in b.terms)


def join_all(opens: Iterable[Open]) -> Open:
    terms: list = []
    for o in opens:
        terms.extend(o.terms)
    return normalize(terms)


def meet_all(opens: Iterable[Open]) -> Open:
    acc = TOP
    for o in opens:
        acc = meet(acc, o)
        if acc.is_bottom:
            return acc
    return acc


def leq_syntactic(a: Open, b: Open) -> bool:
    """Sufficient test for a <= b: every meet of a contains some meet of b."""
    bs = b.basics()
    return all(any(y <= frozenset(x) for y in bs) for x in a.terms)
