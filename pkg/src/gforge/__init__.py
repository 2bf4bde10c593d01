"""Compile geometric theories into their syntactic localic groupoid at a
finite index truncation, with a brute-force point-set oracle."""
from importlib import resources

from .theory import (And, Atom, Eq, Exists, Or, Relation, Sequent, Sort, Theory, Top,
                     free_variables, validate_theory)
from .parser import ParseError, parse_theory, render_theory
from .opens import Generator, Open, meet, join, normalize
from .propositional import (IndexSet, instantiate_formula, iso_expansion,
                            double_iso_expansion, propositionalize)
from .groupoid import apply_map, build_groupoid, is_closure_fixed

__all__ = [
    "And", "Atom", "Eq", "Exists", "Or", "Relation", "Sequent", "Sort", "Theory", "Top",
    "free_variables", "validate_theory", "ParseError", "parse_theory", "render_theory",
    "Generator", "Open", "meet", "join", "normalize", "IndexSet", "instantiate_formula",
    "iso_expansion", "double_iso_expansion", "propositionalize", "apply_map",
    "build_groupoid", "is_closure_fixed", "BUNDLED", "bundled_path", "load_bundled",
]

BUNDLED = ("linear_order", "dedekind_grid", "partial_surjection", "propositional_demo")


def bundled_path(name: str):
    return resources.files(__package__).joinpath("theories", f"{name}.gt")


def load_bundled(name: str) -> Theory:
    return parse_theory(bundled_path(name).read_text(encoding="utf-8"))
