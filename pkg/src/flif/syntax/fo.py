"""First-order formulas over relation atoms with separated inputs.

Concrete syntax::

    fo  := "exists" VAR "." fo | or
    or  := and ("||" and)*
    and := un ("&" un)*
    un  := "!" un | "exists" VAR "." fo | REL "(" vars ";" vars ")"
         | VAR "=" (VAR | CONST) | "(" fo ")"

A single ``|`` is accepted as disjunction too; the printer emits ``||``.
Constants may only appear on the right of ``x = "c"``. ``exists`` extends
as far right as possible.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from functools import reduce

from ..errors import ArityMismatch, ConstantPlacementError
from ..model import Schema
from ..names import FreshVarSource
from .flif import RelAtom
from .lexer import TokenStream, quote


class Formula:
    __slots__ = ()

    def __str__(self) -> str:
        return print_fo(self)


@dataclass(frozen=True)
class Eq(Formula):
    left: str
    right: str


@dataclass(frozen=True)
class EqConst(Formula):
    var: str
    const: str


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula


def conj(parts: Iterable) -> Formula | None:
    parts = list(parts)
    return reduce(And, parts) if parts else None


def exists_all(variables: Iterable[str], body) -> Formula:
    """``exists v1. exists v2. ... body`` in the given order."""
    for v in reversed(list(variables)):
        body = Exists(v, body)
    return body


# -- variables -------------------------------------------------------------


def free_vars(f) -> frozenset:
    if isinstance(f, RelAtom):
        return frozenset(f.inputs) | frozenset(f.outputs)
    if isinstance(f, Eq):
        return frozenset((f.left, f.right))
    if isinstance(f, EqConst):
        return frozenset((f.var,))
    if isinstance(f, (And, Or)):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, Not):
        return free_vars(f.body)
    if isinstance(f, Exists):
        return free_vars(f.body) - {f.var}
    raise TypeError(f"not a formula: {f!r}")


def all_vars(f) -> frozenset:
    if isinstance(f, Exists):
        return all_vars(f.body) | {f.var}
    if isinstance(f, (And, Or)):
        return all_vars(f.left) | all_vars(f.right)
    if isinstance(f, Not):
        return all_vars(f.body)
    return free_vars(f)


def bound_vars(f) -> list[str]:
    """Quantified variables in pre-order, with repetitions."""
    if isinstance(f, Exists):
        return [f.var, *bound_vars(f.body)]
    if isinstance(f, (And, Or)):
        return bound_vars(f.left) + bound_vars(f.right)
    if isinstance(f, Not):
        return bound_vars(f.body)
    return []


def subformulas(f) -> Iterator:
    """Post-order, ``f`` itself last."""
    if isinstance(f, (And, Or)):
        yield from subformulas(f.left)
        yield from subformulas(f.right)
    elif isinstance(f, (Not, Exists)):
        yield from subformulas(f.body)
    yield f


def fo_constants(f) -> frozenset:
    return frozenset(s.const for s in subformulas(f) if isinstance(s, EqConst))


def fo_size(f) -> int:
    return sum(1 for _ in subformulas(f))


def validate_fo(f, schema: Schema) -> None:
    for s in subformulas(f):
        if isinstance(s, RelAtom):
            sig = schema[s.rel]
            if len(s.inputs) != sig.input_arity or len(s.outputs) != sig.output_arity:
                raise ArityMismatch(
                    f"{print_fo(s)}: {s.rel} takes {sig.input_arity} inputs and "
                    f"{sig.output_arity} outputs"
                )


def rename_free(f, mapping: dict):
    """Substitute free occurrences according to ``mapping``.

    Assumes no bound variable of ``f`` is in the image of ``mapping``.
    """
    if isinstance(f, RelAtom):
        g = lambda v: mapping.get(v, v)  # noqa: E731
        return RelAtom(f.rel, map(g, f.inputs), map(g, f.outputs))
    if isinstance(f, Eq):
        return Eq(mapping.get(f.left, f.left), mapping.get(f.right, f.right))
    if isinstance(f, EqConst):
        return EqConst(mapping.get(f.var, f.var), f.const)
    if isinstance(f, (And, Or)):
        return type(f)(rename_free(f.left, mapping), rename_free(f.right, mapping))
    if isinstance(f, Not):
        return Not(rename_free(f.body, mapping))
    if isinstance(f, Exists):
        inner = {k: v for k, v in mapping.items() if k != f.var}
        return Exists(f.var, rename_free(f.body, inner))
    raise TypeError(f"not a formula: {f!r}")


def normalize(f, avoid: Iterable[str] = (), fresh: FreshVarSource | None = None):
    """Rename bound variables apart.

    Afterwards bound variables are pairwise distinct and disjoint from the
    free variables and from ``avoid``. Variables already satisfying this keep
    their names.
    """
    taken = set(free_vars(f)) | set(avoid)
    fresh = fresh or FreshVarSource(taken | all_vars(f))
    fresh.forbid(taken | all_vars(f))
    return _normalize(f, taken, fresh)


def _normalize(f, taken: set, fresh: FreshVarSource):
    if isinstance(f, Exists):
        var = f.var
        body = f.body
        if var in taken:
            new = fresh.fresh(var)
            body = rename_free(body, {var: new})
            var = new
        taken.add(var)
        return Exists(var, _normalize(body, taken, fresh))
    if isinstance(f, (And, Or)):
        left = _normalize(f.left, taken, fresh)
        return type(f)(left, _normalize(f.right, taken, fresh))
    if isinstance(f, Not):
        return Not(_normalize(f.body, taken, fresh))
    return f


def is_hygienic(f) -> bool:
    bv = bound_vars(f)
    return len(bv) == len(set(bv)) and not (set(bv) & free_vars(f))


# -- printing --------------------------------------------------------------


def _prec(f) -> int:
    if isinstance(f, Exists):
        return 0
    if isinstance(f, Or):
        return 1
    if isinstance(f, And):
        return 2
    if isinstance(f, Not):
        return 3
    return 4


def print_fo(f) -> str:
    if isinstance(f, RelAtom):
        return f"{f.rel}({','.join(f.inputs)};{','.join(f.outputs)})"
    if isinstance(f, Eq):
        return f"{f.left} = {f.right}"
    if isinstance(f, EqConst):
        return f"{f.var} = {quote(f.const)}"
    if isinstance(f, Exists):
        return f"exists {f.var}. {print_fo(f.body)}"
    if isinstance(f, Not):
        inner = print_fo(f.body)
        if not isinstance(f.body, (RelAtom, Not)):
            inner = f"({inner})"
        return f"!{inner}"
    p = _prec(f)
    left = print_fo(f.left)
    if _prec(f.left) < p:
        left = f"({left})"
    right = print_fo(f.right)
    if _prec(f.right) <= p:
        right = f"({right})"
    op = "&" if isinstance(f, And) else "||"
    return f"{left} {op} {right}"


# -- parsing ---------------------------------------------------------------


def parse_fo(text: str, hygiene: bool = True):
    ts = TokenStream(text)
    f = _fo(ts)
    ts.end()
    return normalize(f) if hygiene else f


def _fo(ts: TokenStream):
    if ts.peek().kind == "ident" and ts.peek().text == "exists":
        return _exists(ts)
    return _or(ts)


def _exists(ts: TokenStream):
    ts.next()
    var = ts.ident("variable")
    ts.expect(".")
    return Exists(var, _fo(ts))


def _or(ts: TokenStream):
    f = _and(ts)
    while ts.accept("||") or ts.accept("|"):
        f = Or(f, _and(ts))
    return f


def _and(ts: TokenStream):
    f = _un(ts)
    while ts.accept("&"):
        f = And(f, _un(ts))
    return f


def _varlist(ts: TokenStream, closer: str) -> tuple[str, ...]:
    out = []
    if ts.at(closer):
        return ()
    while True:
        if ts.peek().kind == "string":
            ts.error("constants may only appear in equalities x = c", cls=ConstantPlacementError)
        out.append(ts.ident("variable"))
        if not ts.accept(","):
            return tuple(out)


def _un(ts: TokenStream):
    tok = ts.peek()
    if ts.accept("!"):
        return Not(_un(ts))
    if tok.kind == "string":
        ts.error("constants may only appear on the right of x = c", tok, cls=ConstantPlacementError)
    if tok.kind == "ident" and tok.text == "exists":
        return _exists(ts)
    if tok.kind == "ident" and ts.at("(", 1):
        rel = ts.next().text
        ts.expect("(")
        xs = _varlist(ts, ";")
        ts.expect(";")
        ys = _varlist(ts, ")")
        ts.expect(")")
        return RelAtom(rel, xs, ys)
    if tok.kind == "ident" and ts.at("=", 1):
        var = ts.next().text
        ts.next()
        rhs = ts.next()
        if rhs.kind == "ident":
            return Eq(var, rhs.text)
        if rhs.kind == "string":
            return EqConst(var, rhs.value)
        ts.error("expected a variable or a quoted constant", rhs)
    if ts.accept("("):
        f = _fo(ts)
        ts.expect(")")
        return f
    ts.error(f"unexpected {tok.text or 'end of input'!r}", tok)
