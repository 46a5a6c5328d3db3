"""Explicit-state CTL model checking with evidence: minimal witness and
counterexample submodels, proof objects, and their serialized bundles."""

__version__ = "0.1.0"

from .formula import (  # noqa: F401
    Formula, FormulaSet, ParseError, depth, desugar, parse_formula, pretty,
    subformula_closure,
)
from .model import (  # noqa: F401
    Assertion, Model, ModelError, Path, dump_model, is_submodel, join,
    kripke, load_model, maximal_lassos,
)
