"""FLIF to executable FO using three copies of the variable set.

Variable ``x_i`` of the source expression has copies ``y_i`` (the value at
the end of the path) and ``z_i`` (scratch copy used below compositions).
Nested compositions rotate through the three copies, so the result never
uses more than ``3n`` variable names.
"""

from __future__ import annotations

from collections.abc import Sequence

from ..errors import InputDomainMismatch
from ..names import FreshVarSource
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
    variables,
)
from ..syntax.fo import And, Eq, EqConst, Not, Or, conj, exists_all


def flif_to_exfo_3n(
    alpha: Expr,
    vx: Sequence[str],
    vy: Sequence[str] | None = None,
    vz: Sequence[str] | None = None,
):
    """Formula over ``vx ∪ vy`` that holds of ``nu1 ∪ nu2'`` iff ``(nu1, nu2)`` is a path.

    ``nu2'`` is ``nu2`` moved onto the ``vy`` copy. The result is
    ``vx``-executable.
    """
    vx = list(vx)
    extra = variables(alpha) - set(vx)
    if extra:
        raise InputDomainMismatch(f"expression uses {sorted(extra)} outside {vx}")
    if len(set(vx)) != len(vx):
        raise InputDomainMismatch("variable list has duplicates")
    names = FreshVarSource(vx)
    if vy is None:
        vy = [names.fresh("y") for _ in vx]
    else:
        names.forbid(vy)
    if vz is None:
        vz = [names.fresh("z") for _ in vx]
    vy, vz = list(vy), list(vz)
    if not (len(vx) == len(vy) == len(vz)) or len(set(vx) | set(vy) | set(vz)) != 3 * len(vx):
        raise InputDomainMismatch("the three variable copies must be disjoint and equally long")
    copies = {"x": vx, "y": vy, "z": vz}
    pos = {v: i for i, v in enumerate(vx)}
    return _phi(alpha, "x", "y", copies, pos)


def _phi(e: Expr, u: str, v: str, copies: dict, pos: dict):
    cu = lambda a: copies[u][pos[a]]  # noqa: E731
    cv = lambda a: copies[v][pos[a]]  # noqa: E731
    vx = copies["x"]

    def frame(skip):
        return [Eq(cv(c), cu(c)) for c in vx if c not in skip]

    if isinstance(e, RelAtom):
        atom = RelAtom(e.rel, map(cu, e.inputs), map(cv, e.outputs))
        return conj([atom, *frame(set(e.outputs))])
    if isinstance(e, EqTest):
        return conj([Eq(cu(e.left), cu(e.right)), *frame(())])
    if isinstance(e, ConstTest):
        return conj([EqConst(cu(e.var), e.const), *frame(())])
    if isinstance(e, Assign):
        return conj([Eq(cv(e.target), cu(e.source)), *frame({e.target})])
    if isinstance(e, ConstAssign):
        return conj([EqConst(cv(e.target), e.const), *frame({e.target})])
    if isinstance(e, Union):
        return Or(_phi(e.left, u, v, copies, pos), _phi(e.right, u, v, copies, pos))
    if isinstance(e, Diff):
        return And(_phi(e.left, u, v, copies, pos), Not(_phi(e.right, u, v, copies, pos)))
    if isinstance(e, Comp):
        (w,) = {"x", "y", "z"} - {u, v}
        body = And(_phi(e.left, u, w, copies, pos), _phi(e.right, w, v, copies, pos))
        return exists_all(copies[w], body)
    raise TypeError(f"not an FLIF expression: {e!r}")
