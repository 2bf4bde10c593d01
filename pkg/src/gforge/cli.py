"""gforge: command-line front end.

    gforge check  FILE
    gforge emit   FILE --k N [--which objects|arrows|comp|groupoid]
    gforge adjoint FILE --k N --expr 'leq2(1,2) & alpha.X(1)=1' [--lower source|target|closure]
    gforge verify FILE --k N [--suite laws|adjunction|frobenius|closure|all]
    gforge models FILE --k N [--list]

Open expressions: generators joined by '|' and met by '&', parentheses allowed.
A relation generator carries its copy tag as a trailing digit (leq1(0,1),
leq2(0,1)); equality generators are per.X(n,m) / per1.X(n,m) / per2.X(n,m);
isomorphism generators are alpha.X(n)=m.  'true' and 'false' are top and bottom.

Exit status: 0 success, 1 validation or verification failure, 2 I/O or usage error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from dataclasses import dataclass
from typing import Optional

from . import checks
from .groupoid import GroupoidPresentation, build_groupoid
from .oracle import PointGroupoid, SizeGuardError, enumerate_models
from .parser import OpenExprError, ParseError, parse_open, parse_theory
from .propositional import FramePresentation
from .theory import Theory

log = logging.getLogger("gforge")

OK, FAILED, USAGE = 0, 1, 2


@dataclass(frozen=True)
class RunConfig:
    command: str
    path: str
    k: int = 2
    format: str = "text"
    unsafe_no_guard: bool = False
    max_arity: int = 2
    seed: int = 0
    samples: int = 1000
    which: str = "objects"
    suite: str = "all"
    expr: Optional[str] = None
    lower: str = "source"
    composition: str = "relational"
    list_models: bool = False

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError("--k must be at least 1")


class UsageError(Exception):
    pass


def load(path: str) -> Theory:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise UsageError(f"{path}: {e.strerror}") from None
    return parse_theory(text)


# --- serialization ---------------------------------------------------------------------

def presentation_json(p: FramePresentation) -> dict:
    index = {g: i for i, g in enumerate(p.generators)}
    return {
        "provenance": p.provenance,
        "theory": p.source_name,
        "k": p.k,
        "generators": [g.to_json() for g in p.generators],
        "inequalities": [{"lhs": q.lhs.to_json(index), "rhs": q.rhs.to_json(index)}
                         for q in p.inequalities],
    }


def groupoid_json(G: GroupoidPresentation) -> dict:
    pres = {"objects": G.objects, "arrows": G.arrows, "comp": G.comp}
    names = {id(p): n for n, p in pres.items()}
    maps = {}
    for m in (G.s_star, G.t_star, G.e_star, G.i_star, G.m_star, G.pi1_star, G.pi2_star):
        dom = {g: i for i, g in enumerate(m.domain.generators)}
        cod = {g: i for i, g in enumerate(m.codomain.generators)}
        maps[m.name] = {
            "domain": names[id(m.domain)],
            "codomain": names[id(m.codomain)],
            "images": [{"generator": dom[g], "image": img.to_json(cod)}
                       for g, img in sorted(m.images.items())],
        }
    return {"groupoid": {"theory": G.theory.name, "k": G.k, "composition": G.composition,
                         **{n: presentation_json(p) for n, p in pres.items()},
                         "maps": maps}}


def presentation_text(p: FramePresentation) -> str:
    lines = [f"# {p.provenance} presentation of {p.source_name or '<anonymous>'} at k={p.k}",
             f"generators ({len(p.generators)}):"]
    lines += [f"  {g}" for g in p.generators]
    lines.append(f"relations ({len(p.inequalities)}):")
    lines += [f"  {q}" for q in p.inequalities]
    return "\n".join(lines)


def dump(obj: dict) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False)


# --- commands ------------------------------------------------------------------------------

def cmd_check(cfg: RunConfig, out) -> int:
    t = load(cfg.path)
    if cfg.format == "json":
        print(dump({"ok": True, "theory": t.name, "sorts": len(t.sorts),
                    "relations": len(t.relations), "axioms": len(t.axioms)}), file=out)
    else:
        print(f"ok: {t.name or cfg.path}: {len(t.sorts)} sorts, {len(t.relations)} relations, "
              f"{len(t.axioms)} axioms", file=out)
    return OK


def cmd_emit(cfg: RunConfig, out) -> int:
    t = load(cfg.path)
    G = build_groupoid(t, cfg.k, cfg.composition)
    if cfg.which == "groupoid":
        if cfg.format == "json":
            print(dump(groupoid_json(G)), file=out)
        else:
            for p in (G.objects, G.arrows, G.comp):
                print(presentation_text(p), file=out)
        return OK
    p = {"objects": G.objects, "arrows": G.arrows, "comp": G.comp}[cfg.which]
    if cfg.format == "json":
        print(dump({"presentation": presentation_json(p)}), file=out)
    else:
        print(presentation_text(p), file=out)
    return OK


def cmd_adjoint(cfg: RunConfig, out) -> int:
    if not cfg.expr:
        raise UsageError("adjoint needs --expr")
    t = load(cfg.path)
    G = build_groupoid(t, cfg.k)
    target = G.objects if cfg.lower == "closure" else G.arrows
    try:
        o = parse_open(cfg.expr, target)
    except OpenExprError as e:
        print(f"error: {e}", file=sys.stderr)
        return FAILED
    if cfg.lower == "source":
        res = G.source_lower(o)
    elif cfg.lower == "target":
        res = G.target_lower(o)
    else:
        res = G.closure(o)
    if cfg.format == "json":
        index = {g: i for i, g in enumerate(G.objects.generators)}
        print(dump({"input": str(o), "lower": cfg.lower, "k": cfg.k,
                    "result": str(res), "terms": res.to_json(index),
                    "generators": [g.to_json() for g in G.objects.generators]}), file=out)
    else:
        print(res, file=out)
    return OK


def cmd_verify(cfg: RunConfig, out) -> int:
    t = load(cfg.path)
    started = time.perf_counter()
    G = build_groupoid(t, cfg.k, cfg.composition)
    pg = PointGroupoid.build(t, cfg.k, guard=not cfg.unsafe_no_guard)
    suites = checks.SUITES if cfg.suite == "all" else (cfg.suite,)
    report = {"theory": t.name, "k": cfg.k, "seed": cfg.seed, "max_arity": cfg.max_arity,
              "composition": cfg.composition, "models": len(pg.models), "isos": len(pg.isos),
              "suites": {}}
    passed = True
    for s in suites:
        results = checks.run_suite(s, G, pg, cfg.max_arity, cfg.seed, cfg.samples)
        report["suites"][s] = [r.to_json() for r in results]
        passed &= all(r.passed for r in results if not checks.informational(r))
    report["passed"] = passed
    report["seconds"] = round(time.perf_counter() - started, 3)
    if cfg.format == "json":
        print(dump(report), file=out)
    else:
        for s, results in report["suites"].items():
            for r in results:
                mark = "PASS" if r["passed"] else ("INFO" if r.get("note") else "FAIL")
                print(f"[{mark}] {s}: {r['name']} ({r['checked']} checked, "
                      f"{r['failures']} failures)", file=out)
                for c in r["counterexamples"][:3]:
                    print(f"         {c}", file=out)
        print("all checks passed" if passed else "verification failed", file=out)
    return OK if passed else FAILED


def model_json(m) -> dict:
    return {"pers": {s: [list(c) for c in cs] for s, cs in m.pers},
            "relations": {r: sorted(map(list, ts)) for r, ts in m.interp}}


def cmd_models(cfg: RunConfig, out) -> int:
    t = load(cfg.path)
    ms = enumerate_models(t, cfg.k, guard=not cfg.unsafe_no_guard)
    if cfg.format == "json":
        doc = {"theory": t.name, "k": cfg.k, "count": len(ms)}
        if cfg.list_models:
            doc["models"] = [model_json(m) for m in ms]
        print(dump(doc), file=out)
    else:
        print(f"{len(ms)} models", file=out)
        if cfg.list_models:
            for m in ms:
                print(f"  {m}", file=out)
    return OK


COMMANDS = {"check": cmd_check, "emit": cmd_emit, "adjoint": cmd_adjoint,
            "verify": cmd_verify, "models": cmd_models}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gforge", description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("file")
    ap.add_argument("--k", type=int, default=2, help="index set size (default 2)")
    ap.add_argument("--which", choices=("objects", "arrows", "comp", "groupoid"),
                    default="objects")
    ap.add_argument("--suite", choices=checks.SUITES + ("all",), default="all")
    ap.add_argument("--format", choices=("json", "text"), default=None)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--samples", type=int, default=1000,
                    help="random open pairs for the semantic Frobenius check")
    ap.add_argument("--max-arity", type=int, default=2,
                    help="largest meet of generators enumerated by verify")
    ap.add_argument("--expr", help="open expression for adjoint")
    ap.add_argument("--lower", choices=("source", "target", "closure"), default="source")
    ap.add_argument("--composition", choices=("relational", "literal"), default="relational",
                    help="composition formula for m*; 'literal' is a known-bad regression form")
    ap.add_argument("--list", dest="list_models", action="store_true")
    ap.add_argument("--unsafe-no-guard", action="store_true",
                    help="skip the enumeration size guard (see GFORGE_MAX_STRUCTURES)")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def main(argv: Optional[list[str]] = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    fmt = args.format or ("json" if args.command in ("emit", "verify") else "text")
    try:
        cfg = RunConfig(args.command, args.file, args.k, fmt, args.unsafe_no_guard,
                        args.max_arity, args.seed, args.samples, args.which, args.suite,
                        args.expr, args.lower, args.composition, args.list_models)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE
    try:
        return COMMANDS[cfg.command](cfg, out)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE
    except ParseError as e:
        print(f"{cfg.path}:{e}", file=sys.stderr)
        return FAILED
    except SizeGuardError as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
