"""Abstract syntax, parsers and printers for FLIF and executable FO."""

from .flif import (
    Assign,
    Comp,
    ConstAssign,
    ConstTest,
    Diff,
    EqTest,
    Expr,
    RelAtom,
    Renaming,
    Union,
    apply_renaming,
    compose,
    constants,
    intersect,
    parse_flif,
    print_flif,
    size,
    subexpressions,
    validate,
    variables,
)
from .fo import (
    And,
    Eq,
    EqConst,
    Exists,
    Not,
    Or,
    free_vars,
    normalize,
    parse_fo,
    print_fo,
    validate_fo,
)

__all__ = [
    "And", "Assign", "Comp", "ConstAssign", "ConstTest", "Diff", "Eq", "EqConst",
    "EqTest", "Exists", "Expr", "Not", "Or", "RelAtom", "Renaming", "Union",
    "apply_renaming", "compose", "constants", "free_vars", "intersect", "normalize",
    "parse_flif", "parse_fo", "print_flif", "print_fo", "size", "subexpressions",
    "validate", "validate_fo", "variables",
]
