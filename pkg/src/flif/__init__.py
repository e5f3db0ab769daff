"""Forward logic of information flows over databases with limited access patterns."""

from .analysis import IoProfile, exec_check, io_profile, is_io_disjoint
from .errors import FlifError, InputError, SemanticError
from .evaluate import ValuationSet, eval_exfo, eval_flif, eval_flif_v, in_sem
from .model import Instance, Schema, Signature, Valuation, access, adom
from .plan import compile_plan, eval_plan, plan_schema
from .syntax import parse_flif, parse_fo, print_flif, print_fo
from .translate import (
    exfo_to_flif,
    flif_to_exfo_3n,
    flifio_to_exfo,
    rewrite_io_disjoint,
)

__all__ = [
    "FlifError", "InputError", "Instance", "IoProfile", "Schema", "SemanticError",
    "Signature", "Valuation", "ValuationSet", "access", "adom", "compile_plan",
    "eval_exfo", "eval_flif", "eval_flif_v", "eval_plan", "exec_check", "exfo_to_flif",
    "flif_to_exfo_3n", "flifio_to_exfo", "in_sem", "io_profile", "is_io_disjoint",
    "parse_flif", "parse_fo", "plan_schema", "print_flif", "print_fo", "rewrite_io_disjoint",
]
