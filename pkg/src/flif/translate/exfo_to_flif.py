"""Executable FO to FLIF."""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass

from ..analysis import exec_check
from ..errors import NotExecutable
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
    compose,
    then,
    variables,
)
from ..syntax.fo import (
    And,
    Eq,
    EqConst,
    Exists,
    Not,
    Or,
    all_vars,
    free_vars,
    normalize,
    print_fo,
)

RESET_CONSTANT = "⊥c"


@dataclass(frozen=True)
class ExfoTranslation:
    expr: Expr
    formula: object  # the bound-variable-normalized input formula
    bound: frozenset  # the input variables V
    fresh: tuple  # auxiliary variables introduced, in issue order

    @property
    def variables(self) -> frozenset:
        return variables(self.expr) | self.bound


def exfo_to_flif(
    phi,
    V: Iterable[str],
    fresh: FreshVarSource | None = None,
    constant: str = RESET_CONSTANT,
) -> ExfoTranslation:
    """Translate a ``V``-executable formula into an FLIF expression.

    Starting from any valuation that extends the ``V`` values, the
    expression reaches exactly the answers of the formula once restricted to
    ``FV(phi) ∪ V``, and it never changes the variables in ``V``.
    """
    V = frozenset(V)
    verdict = exec_check(phi, V)
    if not verdict:
        raise NotExecutable(
            f"formula is not executable for {{{','.join(sorted(V))}}}: "
            f"{print_fo(verdict.witness)}: {verdict.reason}",
            verdict.witness,
            V,
        )
    fresh = fresh or FreshVarSource()
    fresh.forbid(all_vars(phi) | V)
    phi = normalize(phi, avoid=V, fresh=fresh)
    start = len(fresh.issued)
    expr = _tr(phi, V, fresh, constant)
    return ExfoTranslation(expr, phi, V, tuple(fresh.issued[start:]))


def _tr(f, V: frozenset, fresh: FreshVarSource, c: str) -> Expr:
    if isinstance(f, RelAtom):
        renamed: dict[str, str] = {}
        outs = []
        for y in f.outputs:
            if y in V:
                if y not in renamed:
                    renamed[y] = fresh.fresh(y)
                outs.append(renamed[y])
            else:
                outs.append(y)
        checks = compose(EqTest(z, y) for y, z in renamed.items())
        return then(RelAtom(f.rel, f.inputs, outs), checks)
    if isinstance(f, Eq):
        # an equality with one unbound side binds it
        if f.left in V and f.right in V:
            return EqTest(f.left, f.right)
        if f.left in V:
            return Assign(f.right, f.left)
        return Assign(f.left, f.right)
    if isinstance(f, EqConst):
        return ConstTest(f.var, f.const) if f.var in V else ConstAssign(f.var, f.const)
    if isinstance(f, And):
        fv1 = free_vars(f.left)
        a1 = _tr(f.left, V & fv1, fresh, c)
        a2 = _tr(f.right, (V | fv1) & free_vars(f.right), fresh, c)
        return Comp(a1, a2)
    if isinstance(f, Exists):
        # normalization keeps bound variables out of V
        return _tr(f.body, V, fresh, c)
    if isinstance(f, Or):
        return Union(_tr(f.left, V, fresh, c), _tr(f.right, V, fresh, c))
    if isinstance(f, Not):
        a1 = _tr(f.body, V, fresh, c)
        scratch = sorted(variables(a1) - V) or [fresh.fresh("r")]
        reset = compose(ConstAssign(z, c) for z in scratch)
        return Diff(reset, Comp(a1, reset))
    raise TypeError(f"not a formula: {f!r}")
