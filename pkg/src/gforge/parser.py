"""Text format for geometric theories.

    theory linear_order
    sorts: X
    relations: leq(X, X)
    axioms:
      refl: [x:X] true => leq(x, x)
      inhabited: [] true => exists x:X. true

``exists`` binds weakest, then ``|``, then ``&``.  ``#`` starts a comment.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from .opens import BOTTOM, ISO_KINDS, PER, REL, TOP, Generator, Open, join, meet
from .theory import (FALSE, TRUE, And, Atom, Eq, Exists, Formula, Or, Relation,
                     Sequent, Sort, Theory, Top, validate_theory)

KEYWORDS = {"theory", "sorts", "relations", "axioms", "true", "false", "exists"}

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r\n]+|\#[^\n]*)
  | (?P<id>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<num>[0-9]+)
  | (?P<op>=>|[:,()\[\]=&|.])
""", re.VERBOSE)


@dataclass(frozen=True)
class SourceSpan:
    start: int  # byte offset
    end: int
    line: int
    column: int

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"


class ParseError(Exception):
    def __init__(self, message: str, span: SourceSpan,
                 expected: frozenset[str] = frozenset(), label: Optional[str] = None):
        self.message = message
        self.span = span
        self.expected = expected
        self.label = label
        text = f"{span}: {message}"
        if label:
            text += f" (axiom {label})"
        if expected:
            text += "; expected one of: " + ", ".join(sorted(expected))
        super().__init__(text)


@dataclass(frozen=True)
class Token:
    kind: str  # id | num | op | kw | eof
    text: str
    start: int  # character offset
    end: int


def _tokenize(text: str) -> list[Token]:
    out: list[Token] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}",
                             _span(text, pos, pos + 1))
        kind = m.lastgroup
        if kind != "ws":
            tok = m.group()
            if kind == "id" and tok in KEYWORDS:
                kind = "kw"
            out.append(Token(kind, tok, m.start(), m.end()))
        pos = m.end()
    out.append(Token("eof", "", len(text), len(text)))
    return out


def _span(text: str, start: int, end: int) -> SourceSpan:
    line = text.count("\n", 0, start) + 1
    col = start - (text.rfind("\n", 0, start) + 1) + 1
    b0 = len(text[:start].encode("utf-8"))
    b1 = b0 + len(text[start:end].encode("utf-8"))
    return SourceSpan(b0, b1, line, col)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.label: Optional[str] = None
        self.sorts: dict[str, Sort] = {}
        self.relations: dict[str, Relation] = {}

    # -- token helpers --
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def error(self, message: str, tok: Optional[Token] = None,
              expected: tuple[str, ...] = (), end: Optional[int] = None) -> ParseError:
        tok = tok or self.tok
        return ParseError(message, _span(self.text, tok.start, tok.end if end is None else end),
                          frozenset(expected), self.label)

    def at(self, text: str) -> bool:
        return self.tok.text == text and self.tok.kind in ("op", "kw")

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise self.error(f"unexpected {self.tok.text or 'end of input'!r}",
                             expected=(repr(text),))
        return self.advance()

    def advance(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def ident(self, what: str) -> Token:
        if self.tok.kind != "id":
            raise self.error(f"expected {what}, got {self.tok.text or 'end of input'!r}",
                             expected=(what,))
        return self.advance()

    # -- sections --
    def theory(self) -> Theory:
        name = ""
        if self.at("theory"):
            self.advance()
            name = self.ident("theory name").text
        self.expect("sorts")
        self.expect(":")
        sorts = self.sort_decls()
        self.expect("relations")
        self.expect(":")
        relations = self.relation_decls()
        self.expect("axioms")
        self.expect(":")
        axioms = []
        labels: set[str] = set()
        while self.tok.kind == "id":
            ax = self.axiom()
            if ax.label in labels:
                raise ParseError("duplicate axiom label", self._label_span, label=ax.label)
            labels.add(ax.label)
            axioms.append(ax)
        if self.tok.kind != "eof":
            raise self.error(f"unexpected {self.tok.text!r}", expected=("axiom label", "end of input"))
        return Theory(name, tuple(sorts), tuple(relations), tuple(axioms))

    def sort_decls(self) -> list[Sort]:
        out: list[Sort] = []
        if self.tok.kind != "id":
            return out
        while True:
            t = self.ident("sort name")
            if t.text in self.sorts:
                raise self.error(f"duplicate sort {t.text}", t)
            s = Sort(t.text)
            self.sorts[t.text] = s
            out.append(s)
            if not self.at(","):
                return out
            self.advance()

    def relation_decls(self) -> list[Relation]:
        out: list[Relation] = []
        if self.tok.kind != "id":
            return out
        while True:
            t = self.ident("relation name")
            if t.text in self.relations:
                raise self.error(f"duplicate relation {t.text}", t)
            sig: list[Sort] = []
            if self.at("("):
                self.advance()
                if not self.at(")"):
                    while True:
                        st = self.ident("sort name")
                        if st.text not in self.sorts:
                            raise self.error(f"undeclared sort {st.text}", st)
                        sig.append(self.sorts[st.text])
                        if not self.at(","):
                            break
                        self.advance()
                self.expect(")")
            r = Relation(t.text, tuple(sig))
            self.relations[t.text] = r
            out.append(r)
            if not self.at(","):
                return out
            self.advance()

    def axiom(self) -> Sequent:
        lt = self.ident("axiom label")
        self.label = lt.text
        self._label_span = _span(self.text, lt.start, lt.end)
        self.expect(":")
        self.expect("[")
        ctx: list[tuple[str, Sort]] = []
        scope: dict[str, Sort] = {}
        if not self.at("]"):
            while True:
                vt = self.ident("variable")
                if vt.text in scope:
                    raise self.error(f"duplicate context variable {vt.text}", vt)
                self.expect(":")
                s = self.sort_ref()
                ctx.append((vt.text, s))
                scope[vt.text] = s
                if not self.at(","):
                    break
                self.advance()
        self.expect("]")
        premise = self.formula(scope)
        self.expect("=>")
        conclusion = self.formula(scope)
        label = self.label
        self.label = None
        return Sequent(label, tuple(ctx), premise, conclusion)

    def sort_ref(self) -> Sort:
        st = self.ident("sort name")
        if st.text not in self.sorts:
            raise self.error(f"undeclared sort {st.text}", st, expected=tuple(sorted(self.sorts)))
        return self.sorts[st.text]

    # -- formulas --
    def formula(self, scope: dict[str, Sort]) -> Formula:
        if self.at("exists"):
            return self.exists(scope)
        parts = [self.conjunction(scope)]
        while self.at("|"):
            self.advance()
            parts.append(self.conjunction(scope))
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def exists(self, scope: dict[str, Sort]) -> Formula:
        self.expect("exists")
        vt = self.ident("variable")
        if vt.text in scope:
            raise self.error(f"variable {vt.text} shadows an outer binding", vt)
        self.expect(":")
        s = self.sort_ref()
        self.expect(".")
        body = self.formula({**scope, vt.text: s})
        return Exists(vt.text, s, body)

    def conjunction(self, scope: dict[str, Sort]) -> Formula:
        parts = [self.unit(scope)]
        while self.at("&"):
            self.advance()
            parts.append(self.unit(scope))
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def unit(self, scope: dict[str, Sort]) -> Formula:
        t = self.tok
        if self.at("true"):
            self.advance()
            return TRUE
        if self.at("false"):
            self.advance()
            return FALSE
        if self.at("exists"):
            return self.exists(scope)
        if self.at("("):
            self.advance()
            f = self.formula(scope)
            self.expect(")")
            return f
        if t.kind != "id":
            raise self.error(f"unexpected {t.text or 'end of input'!r}",
                             expected=("true", "false", "exists", "(", "relation", "variable"))
        nxt = self.peek()
        if nxt.kind == "op" and nxt.text == "=":
            return self.equality(scope)
        return self.atom(scope)

    def equality(self, scope: dict[str, Sort]) -> Formula:
        lt = self.advance()
        self.expect("=")
        rt = self.ident("variable")
        for v in (lt, rt):
            if v.text not in scope:
                raise self.error(f"unbound variable {v.text}", v)
        if scope[lt.text] != scope[rt.text]:
            raise self.error(f"sort mismatch: {lt.text} has sort {scope[lt.text]}, "
                             f"{rt.text} has sort {scope[rt.text]}", lt, end=rt.end)
        return Eq(scope[lt.text], lt.text, rt.text)

    def atom(self, scope: dict[str, Sort]) -> Formula:
        rt = self.advance()
        if rt.text not in self.relations:
            if rt.text in scope:
                raise self.error(f"variable {rt.text} used as a formula", rt, expected=("=",))
            raise self.error(f"undeclared relation {rt.text}", rt)
        rel = self.relations[rt.text]
        args: list[Token] = []
        end = rt.end
        if self.at("("):
            self.advance()
            if not self.at(")"):
                while True:
                    a = self.ident("variable")
                    if self.at("("):
                        raise self.error(
                            f"function symbol {a.text} is not supported; encode it as a "
                            "relation with functionality and totality axioms", a)
                    args.append(a)
                    if not self.at(","):
                        break
                    self.advance()
            end = self.expect(")").end
        if len(args) != rel.arity:
            raise self.error(f"arity mismatch: {rel.name} expects {rel.arity} "
                             f"argument(s), got {len(args)}", rt, end=end)
        for a, s in zip(args, rel.signature):
            if a.text not in scope:
                raise self.error(f"unbound variable {a.text}", a)
            if scope[a.text] != s:
                raise self.error(f"sort mismatch: {a.text} has sort {scope[a.text]}, "
                                 f"{rel.name} expects {s}", a)
        return Atom(rel, tuple(a.text for a in args))


def parse_theory(text: str) -> Theory:
    """Parse theory source text; raises ParseError with a span on failure."""
    p = _Parser(text)
    t = p.theory()
    report = validate_theory(t)
    if not report.ok:
        d = report.diagnostics[0]
        raise ParseError(d.message, _span(text, 0, 0), label=d.label)
    return t


# --- rendering ---------------------------------------------------------------

def _render(f: Formula, nested: bool = False) -> str:
    if isinstance(f, Top):
        return "true"
    if isinstance(f, Or) and not f.disjuncts:
        return "false"
    if isinstance(f, Atom):
        return f"{f.relation.name}({', '.join(f.args)})"
    if isinstance(f, Eq):
        return f"{f.left} = {f.right}"
    if isinstance(f, Exists):
        s = f"exists {f.var}:{f.sort.name}. {_render(f.body)}"
    elif isinstance(f, Or):
        s = " | ".join(_render(g, True) for g in f.disjuncts)
    elif isinstance(f, And):
        if not f.conjuncts:
            return "true"
        s = " & ".join(_render(g, True) for g in f.conjuncts)
    else:
        raise TypeError(f)
    return f"({s})" if nested else s


def render_theory(t: Theory) -> str:
    lines = []
    if t.name:
        lines.append(f"theory {t.name}")
    lines.append("sorts: " + ", ".join(s.name for s in t.sorts) if t.sorts else "sorts:")
    rels = []
    for r in t.relations:
        rels.append(f"{r.name}({', '.join(s.name for s in r.signature)})")
    lines.append("relations: " + ", ".join(rels) if rels else "relations:")
    lines.append("axioms:")
    for ax in t.axioms:
        ctx = ", ".join(f"{v}:{s.name}" for v, s in ax.context)
        lines.append(f"  {ax.label}: [{ctx}] {_render(ax.premise)} => {_render(ax.conclusion)}")
    return "\n".join(lines) + "\n"


# --- open expressions ---------------------------------------------------------------

class OpenExprError(ValueError):
    pass


_OPEN_TOKEN = re.compile(r"\s*(?:(?P<num>[0-9]+)|(?P<id>[A-Za-z_][A-Za-z0-9_']*)|(?P<op>[()&|.,=]))")


def parse_open(text: str, presentation) -> Open:
    """Parse an open such as ``leq2(1,2) & alpha.X(1)=2 | per1.X(0,0)``.

    Relation generators take their copy tag as a trailing digit; ``per`` and
    iso generators are written ``per<tag>.<Sort>(n,m)`` and
    ``<iso>.<Sort>(n)=m``.  Every generator must belong to ``presentation``.
    """
    toks: list[tuple[str, str]] = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _OPEN_TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise OpenExprError(f"unexpected character {text[pos]!r} at {pos}")
        toks.append((m.lastgroup, m.group(m.lastgroup)))
        pos = m.end()
    toks.append(("eof", ""))
    i = 0
    owned = presentation.generator_set
    k = presentation.k

    def peek() -> tuple[str, str]:
        return toks[i]

    def take(text_: Optional[str] = None) -> str:
        nonlocal i
        kind, val = toks[i]
        if text_ is not None and val != text_:
            raise OpenExprError(f"expected {text_!r}, got {val or 'end of input'!r}")
        i += 1
        return val

    def number() -> int:
        kind, val = peek()
        if kind != "num":
            raise OpenExprError(f"expected an index, got {val or 'end of input'!r}")
        take()
        n = int(val)
        if n >= k:
            raise OpenExprError(f"index {n} out of range for k={k}")
        return n

    def numbers() -> tuple[int, ...]:
        take("(")
        out = []
        if peek()[1] != ")":
            out.append(number())
            while peek()[1] == ",":
                take()
                out.append(number())
        take(")")
        return tuple(out)

    def check(g: Generator) -> Open:
        if g not in owned:
            raise OpenExprError(f"unknown generator {g}")
        return Open.gen(g)

    def generator() -> Open:
        kind, name = peek()
        if kind != "id":
            raise OpenExprError(f"expected a generator, got {name or 'end of input'!r}")
        take()
        if name == "true":
            return TOP
        if name == "false":
            return BOTTOM
        if name in ISO_KINDS:
            take(".")
            sort = take()
            (n,) = numbers()
            take("=")
            return check(Generator(name, sort, 0, (n, number())))
        if name.startswith("per") and (name == "per" or name[3:].isdigit()) and peek()[1] == ".":
            take(".")
            sort = take()
            args = numbers()
            if len(args) != 2:
                raise OpenExprError("per generators take two indices")
            return check(Generator(PER, sort, int(name[3:] or 0), args))
        args = numbers()
        candidates = [Generator(REL, name, 0, args)]
        if name[-1:].isdigit() and len(name) > 1:
            candidates.append(Generator(REL, name[:-1], int(name[-1]), args))
        for g in candidates:
            if g in owned:
                return Open.gen(g)
        raise OpenExprError(f"unknown generator {name}({','.join(map(str, args))})")

    def unit() -> Open:
        if peek()[1] == "(":
            take()
            o = expr()
            take(")")
            return o
        return generator()

    def conjunction() -> Open:
        o = unit()
        while peek()[1] == "&":
            take()
            o = meet(o, unit())
        return o

    def expr() -> Open:
        o = conjunction()
        while peek()[1] == "|":
            take()
            o = join(o, conjunction())
        return o

    out = expr()
    if peek()[0] != "eof":
        raise OpenExprError(f"unexpected {peek()[1]!r}")
    return out
