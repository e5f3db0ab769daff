"""Reference evaluators for FLIF expressions and executable FO formulas.

Everything here is set-at-a-time structural recursion without any
optimization. Relations are only ever read through :func:`flif.model.access`.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Iterator, Mapping

from .analysis import exec_check, io_profile
from .errors import InputDomainMismatch, NotExecutable, UnboundVariable
from .model import Instance, Valuation, access, adom
from .syntax.flif import (
    Assign,
    Comp,
    ConstAssign,
    ConstTest,
    Diff,
    EqTest,
    Expr,
    RelAtom,
    Union,
    constants,
    validate,
    variables,
)
from .syntax.fo import (
    And,
    Eq,
    EqConst,
    Exists,
    Not,
    Or,
    free_vars,
    print_fo,
    validate_fo,
)

PADDING = "⊥"


class ValuationSet:
    """A finite set of valuations all defined on ``schema``."""

    __slots__ = ("schema", "rows")

    def __init__(self, schema: Iterable[str], rows: Iterable[Mapping[str, str]] = ()):
        self.schema = frozenset(schema)
        out = set()
        for r in rows:
            r = r if isinstance(r, Valuation) else Valuation(r)
            if r.domain != self.schema:
                raise InputDomainMismatch(
                    f"row {r!r} is not defined on exactly {sorted(self.schema)}"
                )
            out.add(r)
        self.rows = frozenset(out)

    def __iter__(self) -> Iterator[Valuation]:
        return iter(self.rows)

    def __len__(self) -> int:
        return len(self.rows)

    def __contains__(self, row) -> bool:
        return (row if isinstance(row, Valuation) else Valuation(row)) in self.rows

    def __eq__(self, other):
        if isinstance(other, ValuationSet):
            return self.schema == other.schema and self.rows == other.rows
        return NotImplemented

    def __hash__(self):
        return hash((self.schema, self.rows))

    def __repr__(self):
        return f"ValuationSet({sorted(self.schema)}, {self.sorted()})"

    def sorted(self) -> list[Valuation]:
        return sorted(self.rows, key=Valuation.sort_key)

    def project(self, keep: Iterable[str]) -> ValuationSet:
        keep = frozenset(keep)
        return ValuationSet(keep, (r.restrict(keep) for r in self.rows))


def _check_total(nu: Mapping[str, str], V: frozenset) -> Valuation:
    nu = nu if isinstance(nu, Valuation) else Valuation(nu)
    missing = V - nu.domain
    if missing:
        raise UnboundVariable(sorted(missing)[0])
    if nu.domain != V:
        raise InputDomainMismatch(f"input valuation binds {sorted(nu.domain - V)} outside {sorted(V)}")
    return nu


# -- FLIF ------------------------------------------------------------------


def eval_flif_v(alpha: Expr, V: Iterable[str], D: Instance, nu_in: Mapping[str, str]) -> ValuationSet:
    """All ``nu_out`` with ``(nu_in, nu_out)`` in the semantics of ``alpha`` over ``V``."""
    V = frozenset(V)
    extra = variables(alpha) - V
    if extra:
        raise InputDomainMismatch(f"expression uses {sorted(extra)} outside {sorted(V)}")
    validate(alpha, D.schema)
    nu = _check_total(nu_in, V)
    return ValuationSet(V, _step(alpha, D, nu))


def _step(e: Expr, D: Instance, nu: Valuation) -> set[Valuation]:
    if isinstance(e, RelAtom):
        key = tuple(nu[x] for x in e.inputs)
        out = set()
        for t2 in access(D, e.rel, key):
            m = dict(nu)
            seen: dict[str, str] = {}
            for y, c in zip(e.outputs, t2):
                # a repeated output variable needs equal values in the tuple
                if seen.setdefault(y, c) != c:
                    break
            else:
                m.update(seen)
                out.add(Valuation(m))
        return out
    if isinstance(e, EqTest):
        return {nu} if nu[e.left] == nu[e.right] else set()
    if isinstance(e, ConstTest):
        return {nu} if nu[e.var] == e.const else set()
    if isinstance(e, Assign):
        return {nu.extend(e.target, nu[e.source])}
    if isinstance(e, ConstAssign):
        return {nu.extend(e.target, e.const)}
    if isinstance(e, Comp):
        out = set()
        for mid in _step(e.left, D, nu):
            out |= _step(e.right, D, mid)
        return out
    if isinstance(e, Union):
        return _step(e.left, D, nu) | _step(e.right, D, nu)
    if isinstance(e, Diff):
        # both sides start from the same left endpoint nu
        return _step(e.left, D, nu) - _step(e.right, D, nu)
    raise TypeError(f"not an FLIF expression: {e!r}")


def eval_flif(
    alpha: Expr, D: Instance, nu_in: Mapping[str, str], padding: str = PADDING
) -> ValuationSet:
    """Evaluate from a valuation on exactly the input variables of ``alpha``.

    Output variables that are not inputs get ``padding`` as a start value;
    the result does not depend on it.
    """
    prof = io_profile(alpha)
    nu = nu_in if isinstance(nu_in, Valuation) else Valuation(nu_in)
    if nu.domain != prof.inputs:
        raise InputDomainMismatch(
            f"input valuation must bind exactly {sorted(prof.inputs)}, got {sorted(nu.domain)}"
        )
    start = nu.update({v: padding for v in prof.outputs - prof.inputs})
    return eval_flif_v(alpha, prof.vars, D, start)


def eval_flif_many(alpha: Expr, D: Instance, N: Iterable[Mapping[str, str]]) -> ValuationSet:
    """Union of :func:`eval_flif` over a set of input valuations."""
    rows = set()
    for nu in N:
        rows |= eval_flif(alpha, D, nu).rows
    return ValuationSet(io_profile(alpha).vars, rows)


def in_sem(alpha: Expr, V: Iterable[str], D: Instance, nu1: Mapping, nu2: Mapping) -> bool:
    """Is ``(nu1, nu2)`` in the semantics of ``alpha`` over ``V``?

    Composition guesses the intermediate valuation. Its values are drawn
    from adom(D), the ranges of ``nu1`` and ``nu2`` and the constants of
    ``alpha``: atoms only produce adom values, assignments copy existing
    values or constants, and untouched variables keep their ``nu1`` value, so
    any intermediate of a real path already lives in that set.
    """
    V = frozenset(V)
    validate(alpha, D.schema)
    nu1, nu2 = _check_total(nu1, V), _check_total(nu2, V)
    cand = sorted(adom(D) | set(nu1.values()) | set(nu2.values()) | constants(alpha))
    return _in(alpha, D, nu1, nu2, cand)


def _in(e: Expr, D: Instance, n1: Valuation, n2: Valuation, cand: list) -> bool:
    if isinstance(e, RelAtom):
        ys = set(e.outputs)
        if any(n1[v] != n2[v] for v in n1 if v not in ys):
            return False
        t2 = tuple(n2[y] for y in e.outputs)
        return t2 in access(D, e.rel, tuple(n1[x] for x in e.inputs))
    if isinstance(e, EqTest):
        return n1 == n2 and n1[e.left] == n1[e.right]
    if isinstance(e, ConstTest):
        return n1 == n2 and n1[e.var] == e.const
    if isinstance(e, Assign):
        return n2 == n1.extend(e.target, n1[e.source])
    if isinstance(e, ConstAssign):
        return n2 == n1.extend(e.target, e.const)
    if isinstance(e, Union):
        return _in(e.left, D, n1, n2, cand) or _in(e.right, D, n1, n2, cand)
    if isinstance(e, Diff):
        return _in(e.left, D, n1, n2, cand) and not _in(e.right, D, n1, n2, cand)
    if isinstance(e, Comp):
        v1, v2 = variables(e.left), variables(e.right)
        # a subexpression never changes variables it does not mention
        if any(n1[v] != n2[v] for v in n1 if v not in v1 and v not in v2):
            return False
        base = dict(n1)
        for v in v1 - v2:
            base[v] = n2[v]
        free = sorted(v1 & v2)
        for values in itertools.product(cand, repeat=len(free)):
            mid = dict(base)
            mid.update(zip(free, values))
            mid = Valuation(mid)
            if _in(e.left, D, n1, mid, cand) and _in(e.right, D, mid, n2, cand):
                return True
        return False
    raise TypeError(f"not an FLIF expression: {e!r}")


# -- executable FO ---------------------------------------------------------


def eval_exfo(phi, V: Iterable[str], D: Instance, nu_in: Mapping[str, str]) -> ValuationSet:
    """All valuations on ``V ∪ FV(phi)`` extending ``nu_in`` that satisfy ``phi``."""
    V = frozenset(V)
    verdict = exec_check(phi, V)
    if not verdict:
        raise NotExecutable(
            f"formula is not executable for {{{','.join(sorted(V))}}}: "
            f"{print_fo(verdict.witness)}: {verdict.reason}",
            verdict.witness,
            V,
        )
    validate_fo(phi, D.schema)
    nu = _check_total(nu_in, V)
    return ValuationSet(V | free_vars(phi), _ev(phi, D, nu))


def _ev(f, D: Instance, nu: Valuation) -> set[Valuation]:
    """Extensions of ``nu`` to ``dom(nu) ∪ FV(f)`` satisfying ``f``.

    ``f`` must be executable for ``dom(nu)``.
    """
    if isinstance(f, RelAtom):
        out = set()
        for t2 in access(D, f.rel, tuple(nu[x] for x in f.inputs)):
            m = dict(nu._map)
            for y, c in zip(f.outputs, t2):
                if m.setdefault(y, c) != c:
                    break
            else:
                out.add(Valuation(m))
        return out
    if isinstance(f, Eq):
        l_bound, r_bound = f.left in nu, f.right in nu
        if l_bound and r_bound:
            return {nu} if nu[f.left] == nu[f.right] else set()
        if l_bound:
            return {nu.extend(f.right, nu[f.left])}
        return {nu.extend(f.left, nu[f.right])}
    if isinstance(f, EqConst):
        if f.var in nu:
            return {nu} if nu[f.var] == f.const else set()
        return {nu.extend(f.var, f.const)}
    if isinstance(f, And):
        out = set()
        for mid in _ev(f.left, D, nu):
            out |= _ev(f.right, D, mid)
        return out
    if isinstance(f, Or):
        return _ev(f.left, D, nu) | _ev(f.right, D, nu)
    if isinstance(f, Not):
        return set() if _ev(f.body, D, nu) else {nu}
    if isinstance(f, Exists):
        x = f.var
        if x in nu:
            outer = nu[x]
            inner = _ev(f.body, D, nu.without((x,)))
            return {r.extend(x, outer) for r in inner}
        return {r.without((x,)) for r in _ev(f.body, D, nu)}
    raise TypeError(f"not a formula: {f!r}")
