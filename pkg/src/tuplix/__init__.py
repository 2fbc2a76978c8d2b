"""Budgets as algebraic terms over exact rationals.

A budget is a term built from entries ``a(p)`` (channel ``a`` carries the
rational amount ``p``), guard tests, composition, and encapsulation, with a
totalized inverse on the amounts so that every expression evaluates. The
package normalizes such terms, decides feasibility, and ships a small text
format (``.bgt``) plus a CLI around the same operations.
"""

from importlib import resources
from pathlib import Path

from .algebra import (
    DELTA,
    EPS,
    CanonicalTuplix,
    Comp,
    Delta,
    Encap,
    Entry,
    Eps,
    GroundForm,
    Test,
    Tuplix,
    Violation,
    apply_test_substitution,
    compose,
    denote_ground,
    encap,
    equiv_ground,
    equiv_prob_tuplix,
    free_vars_tuplix,
    ground_of,
    normalize,
    random_tuplix,
    to_term,
)
from .constraints import conjunction_expr, leq_expr, test_and, test_eq, test_leq
from .dsl import BudgetProgram, DslError, elaborate, list_params, parse, pretty_program
from .expr import (
    Abs,
    Add,
    Const,
    Expr,
    Inv,
    Mul,
    Neg,
    UnboundVariableError,
    Var,
    const,
    div,
    equiv_prob,
    evaluate,
    fold_constants,
    free_vars,
    pretty,
    sub,
    substitute,
    substitute_all,
    var,
)
from .laws import all_laws, run_law, run_suite
from .meadow import (
    ONE,
    ZERO,
    Rational,
    format_rational,
    indicator,
    make_rational,
    minv,
    parse_rational,
)

__version__ = "0.1.0"


def bundled(name: str) -> Path:
    """Path of a budget program shipped with the package, e.g. ``msc.bgt``."""
    candidate = resources.files(__package__) / "data" / name
    with resources.as_file(candidate) as path:
        if not path.is_file():
            raise FileNotFoundError(f"no bundled program named {name!r}")
        return path


__all__ = [
    "Abs",
    "Add",
    "BudgetProgram",
    "CanonicalTuplix",
    "Comp",
    "Const",
    "DELTA",
    "Delta",
    "DslError",
    "EPS",
    "Encap",
    "Entry",
    "Eps",
    "Expr",
    "GroundForm",
    "Inv",
    "Mul",
    "Neg",
    "ONE",
    "Rational",
    "Test",
    "Tuplix",
    "UnboundVariableError",
    "Var",
    "Violation",
    "ZERO",
    "all_laws",
    "apply_test_substitution",
    "bundled",
    "compose",
    "conjunction_expr",
    "const",
    "denote_ground",
    "div",
    "elaborate",
    "encap",
    "equiv_ground",
    "equiv_prob",
    "equiv_prob_tuplix",
    "evaluate",
    "fold_constants",
    "format_rational",
    "free_vars",
    "free_vars_tuplix",
    "ground_of",
    "indicator",
    "leq_expr",
    "list_params",
    "make_rational",
    "minv",
    "normalize",
    "parse",
    "parse_rational",
    "pretty",
    "pretty_program",
    "random_tuplix",
    "run_law",
    "run_suite",
    "sub",
    "substitute",
    "substitute_all",
    "test_and",
    "test_eq",
    "test_leq",
    "to_term",
    "var",
]
