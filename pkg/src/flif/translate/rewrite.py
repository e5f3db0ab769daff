"""Rewriting arbitrary FLIF into io-disjoint FLIF by renaming outputs.

Given ``alpha`` and an injective renaming ``rho`` of its output variables
onto unused names, :func:`rewrite_io_disjoint` builds an io-disjoint ``beta``
with the same inputs whose outputs include ``rho(O(alpha))``; the value that
``alpha`` leaves in ``y`` is found in ``rho(y)`` after running ``beta``.
Extra (intermediate) outputs of ``beta`` avoid the forbidden set ``W``.

Where a choice is free, the smallest variable name is taken and fresh names
come from a single :class:`FreshVarSource`, so rewriting is deterministic.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping

from ..analysis import io_profile, is_io_disjoint
from ..errors import BadRenaming, FlifError
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
    Renaming,
    Union,
    apply_renaming,
    compose,
    print_flif,
    variables,
)


class RewriteInvariantError(FlifError):
    """A rewrite broke one of its structural guarantees (a bug, not bad input)."""


def rewrite_io_disjoint(
    alpha: Expr,
    rho: Mapping[str, str],
    W: Iterable[str] = (),
    fresh: FreshVarSource | None = None,
) -> Expr:
    rho = dict(rho)
    W = frozenset(W)
    prof = io_profile(alpha)
    if set(rho) != prof.outputs:
        raise BadRenaming(
            f"renaming must be defined on exactly the outputs {sorted(prof.outputs)}, "
            f"got {sorted(rho)}"
        )
    if len(set(rho.values())) != len(rho):
        raise BadRenaming(f"renaming {rho} is not injective")
    clash = set(rho.values()) & variables(alpha)
    if clash:
        raise BadRenaming(f"renaming targets {sorted(clash)} already occur in the expression")
    fresh = fresh or FreshVarSource()
    fresh.forbid(W | variables(alpha) | set(rho.values()))
    return _rw(alpha, rho, W, fresh)


def default_renaming(alpha: Expr, fresh: FreshVarSource | None = None) -> dict:
    """Rename every output ``y`` to a fresh ``y_k``."""
    fresh = fresh or FreshVarSource()
    fresh.forbid(variables(alpha))
    return {y: fresh.fresh(y) for y in sorted(io_profile(alpha).outputs)}


def _check(alpha: Expr, beta: Expr, rho: dict, W: frozenset) -> Expr:
    pa, pb = io_profile(alpha), io_profile(beta)
    target = set(rho.values())
    problems = []
    if pb.inputs != pa.inputs:
        problems.append(f"inputs {sorted(pb.inputs)} != {sorted(pa.inputs)}")
    if not target <= pb.outputs:
        problems.append(f"outputs miss {sorted(target - pb.outputs)}")
    if (pb.outputs - target) & W:
        problems.append(f"intermediates {sorted((pb.outputs - target) & W)} hit W")
    verdict = is_io_disjoint(beta)
    if not verdict:
        problems.append(f"not io-disjoint at {print_flif(verdict.witness)}")
    if problems:
        raise RewriteInvariantError(
            f"rewriting {print_flif(alpha)} gave {print_flif(beta)}: " + "; ".join(problems)
        )
    return beta


def _resets(targets: Iterable[str], source: str) -> list:
    return [Assign(y, source) for y in sorted(targets)]


def _rw(alpha: Expr, rho: dict, W: frozenset, fresh: FreshVarSource) -> Expr:
    va = variables(alpha)
    if not va:
        return alpha
    if isinstance(alpha, RelAtom):
        beta = RelAtom(alpha.rel, alpha.inputs, [rho[y] for y in alpha.outputs])
    elif isinstance(alpha, Assign):
        beta = Assign(rho[alpha.target], alpha.source)
    elif isinstance(alpha, ConstAssign):
        beta = ConstAssign(rho[alpha.target], alpha.const)
    elif isinstance(alpha, (EqTest, ConstTest)):
        beta = alpha
    elif isinstance(alpha, Comp):
        beta = _rw_comp(alpha, rho, W, fresh)
    elif isinstance(alpha, Union):
        beta = _rw_union(alpha, rho, W, fresh)
    elif isinstance(alpha, Diff):
        beta = _rw_diff(alpha, rho, W, fresh)
    else:
        raise TypeError(f"not an FLIF expression: {alpha!r}")
    return _check(alpha, beta, rho, W)


def _rw_comp(alpha: Comp, rho: dict, W: frozenset, fresh: FreshVarSource) -> Expr:
    a1, a2 = alpha.left, alpha.right
    p1, p2 = io_profile(a1), io_profile(a2)
    va = variables(alpha)

    W2 = W | va | {rho[y] for y in p1.outputs}
    rho2 = {y: rho[y] for y in p2.outputs}
    b2 = _rw(a2, rho2, W2, fresh)

    W1 = W | va
    avoid = va | io_profile(b2).outputs | set(rho.values())
    rho1 = {}
    for y in sorted(p1.outputs):
        if y in p2.outputs and y in p2.inputs:
            # the left result is read and then overwritten by the right part
            rho1[y] = fresh.fresh(y, avoid=avoid)
        else:
            rho1[y] = rho[y]
    b1 = _rw(a1, rho1, W1, fresh)

    swaps = {}
    for y in sorted(p2.inputs & p1.outputs):
        swaps[y] = rho1[y]
        swaps[rho1[y]] = y
    return Comp(b1, apply_renaming(Renaming(swaps), b2))


def _rw_union(alpha: Union, rho: dict, W: frozenset, fresh: FreshVarSource) -> Expr:
    a1, a2 = alpha.left, alpha.right
    p1, p2 = io_profile(a1), io_profile(a2)
    va = variables(alpha)

    rho1 = {y: rho[y] for y in p1.outputs}
    b1 = _rw(a1, rho1, W | va | {rho[y] for y in p2.outputs}, fresh)
    rho2 = {y: rho[y] for y in p2.outputs}
    b2 = _rw(a2, rho2, W | va | io_profile(b1).outputs, fresh)
    o1, o2 = io_profile(b1).outputs, io_profile(b2).outputs

    g1 = [Assign(rho[y], y) for y in sorted(p2.outputs - p1.outputs)]
    g2 = [Assign(rho[y], y) for y in sorted(p1.outputs - p2.outputs)]

    mid2 = o2 - set(rho2.values())
    e1 = _resets(mid2, min(o1) if o1 else min(variables(a2))) if mid2 else []
    mid1 = o1 - set(rho1.values())
    e2 = _resets(mid1, min(o2) if o2 else min(variables(a1))) if mid1 else []
    return Union(compose([b1, *g1, *e1]), compose([b2, *g2, *e2]))


def _rw_diff(alpha: Diff, rho: dict, W: frozenset, fresh: FreshVarSource) -> Expr:
    a1, a2 = alpha.left, alpha.right
    p1, p2 = io_profile(a1), io_profile(a2)
    va = variables(alpha)

    W1 = W | va
    b1 = _rw(a1, dict(rho), W1, fresh)
    W2 = W1 | io_profile(b1).outputs
    rho2 = {}
    for y in sorted(p2.outputs):
        rho2[y] = rho[y] if y in p1.outputs else fresh.fresh(y, avoid=W2 | set(rho.values()))
    b2 = _rw(a2, rho2, W2, fresh)
    o1, o2 = io_profile(b1).outputs, io_profile(b2).outputs

    g1 = [Assign(rho2[y], y) for y in sorted(p2.outputs - p1.outputs)]
    g2 = [Assign(rho[y], y) for y in sorted(p1.outputs - p2.outputs)]

    shared = sorted(rho[y] for y in p1.outputs & p2.outputs)
    mid2 = o2 - set(rho2.values())
    e1 = _resets(mid2, shared[0] if shared else min(variables(a2))) if mid2 else []
    mid1 = o1 - set(rho.values())
    e2 = _resets(mid1, shared[0] if shared else min(variables(a1))) if mid1 else []
    return Diff(compose([b1, *g1, *e1, *e2]), compose([b2, *g2, *e1, *e2]))
