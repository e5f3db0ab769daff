"""Io-disjoint FLIF to executable FO, executable for the input variables."""

from __future__ import annotations

from ..analysis import io_profile, is_io_disjoint
from ..errors import NotIoDisjoint
from ..syntax.flif import (
    Assign,
    Comp,
    ConstAssign,
    ConstTest,
    Diff,
    EqTest,
    Expr,
    RelAtom,
    Union,
    print_flif,
)
from ..syntax.fo import And, Eq, EqConst, Not, Or, exists_all


def flifio_to_exfo(alpha: Expr):
    """Formula with the same free variables whose answers from ``I(alpha)`` match."""
    verdict = is_io_disjoint(alpha)
    if not verdict:
        raise NotIoDisjoint(
            f"{print_flif(verdict.witness)} is not io-disjoint: {verdict.reason}", verdict.witness
        )
    return _tr(alpha)


def _tr(e: Expr):
    if isinstance(e, RelAtom):
        return e
    if isinstance(e, EqTest):
        return Eq(e.left, e.right)
    if isinstance(e, Assign):
        return Eq(e.target, e.source)
    if isinstance(e, ConstTest):
        return EqConst(e.var, e.const)
    if isinstance(e, ConstAssign):
        return EqConst(e.target, e.const)
    if isinstance(e, Comp):
        # the right part overwrites shared outputs, so hide them on the left
        shared = sorted(io_profile(e.left).outputs & io_profile(e.right).outputs)
        return And(exists_all(shared, _tr(e.left)), _tr(e.right))
    if isinstance(e, Union):
        return Or(_tr(e.left), _tr(e.right))
    if isinstance(e, Diff):
        return And(_tr(e.left), Not(_tr(e.right)))
    raise TypeError(f"not an FLIF expression: {e!r}")
