"""Input/output variables of FLIF expressions and executability of FO formulas."""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass
from functools import lru_cache

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
    subexpressions,
)
from .syntax.fo import And, Eq, EqConst, Exists, Not, Or, free_vars


@dataclass(frozen=True)
class IoProfile:
    inputs: frozenset
    outputs: frozenset

    @property
    def vars(self) -> frozenset:
        return self.inputs | self.outputs

    def __str__(self):
        return f"I={{{','.join(sorted(self.inputs))}}} O={{{','.join(sorted(self.outputs))}}}"


@lru_cache(maxsize=65536)
def io_profile(e: Expr) -> IoProfile:
    if isinstance(e, RelAtom):
        return IoProfile(frozenset(e.inputs), frozenset(e.outputs))
    if isinstance(e, EqTest):
        return IoProfile(frozenset((e.left, e.right)), frozenset())
    if isinstance(e, ConstTest):
        return IoProfile(frozenset((e.var,)), frozenset())
    if isinstance(e, Assign):
        return IoProfile(frozenset((e.source,)), frozenset((e.target,)))
    if isinstance(e, ConstAssign):
        return IoProfile(frozenset(), frozenset((e.target,)))
    p1, p2 = io_profile(e.left), io_profile(e.right)
    if isinstance(e, Comp):
        return IoProfile(p1.inputs | (p2.inputs - p1.outputs), p1.outputs | p2.outputs)
    sym = p1.outputs ^ p2.outputs
    if isinstance(e, Union):
        return IoProfile(p1.inputs | p2.inputs | sym, p1.outputs | p2.outputs)
    if isinstance(e, Diff):
        return IoProfile(p1.inputs | p2.inputs | sym, p1.outputs)
    raise TypeError(f"not an FLIF expression: {e!r}")


def inputs(e: Expr) -> frozenset:
    return io_profile(e).inputs


def outputs(e: Expr) -> frozenset:
    return io_profile(e).outputs


@dataclass(frozen=True)
class Verdict:
    """Boolean result with the first offending subterm when false."""

    ok: bool
    witness: object = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def is_io_disjoint(e: Expr) -> Verdict:
    """Structural io-disjointness check.

    The witness is the first failing subexpression in leftmost-innermost
    order.
    """
    for s in subexpressions(e):
        reason = _local_io_failure(s)
        if reason:
            return Verdict(False, s, reason)
    return Verdict(True)


def _local_io_failure(e: Expr) -> str:
    if isinstance(e, RelAtom):
        common = set(e.inputs) & set(e.outputs)
        return f"variables {sorted(common)} are both input and output" if common else ""
    if isinstance(e, Assign) and e.target == e.source:
        # the I/O rules make x both input and output of (x:=x)
        return f"assignment reads and writes {e.target}"
    if isinstance(e, (EqTest, ConstTest, Assign, ConstAssign)):
        return ""
    p1, p2 = io_profile(e.left), io_profile(e.right)
    if isinstance(e, Comp):
        clash = p1.inputs & p2.outputs
        return f"inputs of the left part {sorted(clash)} are outputs of the right part" if clash else ""
    if isinstance(e, Union):
        if p1.outputs != p2.outputs:
            return f"union branches have different outputs {sorted(p1.outputs)} and {sorted(p2.outputs)}"
        return ""
    if not p1.outputs <= p2.outputs:
        return f"outputs {sorted(p1.outputs - p2.outputs)} of the left operand are not outputs of the right"
    return ""


def is_io_disjoint_direct(e: Expr) -> bool:
    """Definition-level check: every subexpression has I ∩ O = ∅."""
    return all(not (io_profile(s).inputs & io_profile(s).outputs) for s in subexpressions(e))


def exec_check(f, bound: Iterable[str]) -> Verdict:
    """Is ``f`` executable given values for ``bound``?

    Works on formulas whose bound variables shadow free ones as well.
    """
    return _exec(f, frozenset(bound))


def _exec(f, V: frozenset) -> Verdict:
    if isinstance(f, Eq):
        if f.left in V or f.right in V:
            return Verdict(True)
        return Verdict(False, f, f"neither {f.left} nor {f.right} is bound")
    if isinstance(f, EqConst):
        return Verdict(True)
    if isinstance(f, RelAtom):
        missing = set(f.inputs) - V
        if missing:
            return Verdict(False, f, f"input variables {sorted(missing)} are not bound")
        return Verdict(True)
    if isinstance(f, Not):
        v = _exec(f.body, V)
        if not v:
            return v
        missing = free_vars(f.body) - V
        if missing:
            return Verdict(False, f, f"negation has unbound free variables {sorted(missing)}")
        return Verdict(True)
    if isinstance(f, And):
        v = _exec(f.left, V)
        if not v:
            return v
        return _exec(f.right, V | free_vars(f.left))
    if isinstance(f, Or):
        v = _exec(f.left, V)
        if not v:
            return v
        v = _exec(f.right, V)
        if not v:
            return v
        missing = (free_vars(f.left) ^ free_vars(f.right)) - V
        if missing:
            return Verdict(False, f, f"disjuncts disagree on unbound variables {sorted(missing)}")
        return Verdict(True)
    if isinstance(f, Exists):
        return _exec(f.body, V - {f.var})
    raise TypeError(f"not a formula: {f!r}")
