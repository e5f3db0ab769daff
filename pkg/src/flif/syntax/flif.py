"""FLIF expressions: AST, parser, printer and variable renaming.

Concrete syntax::

    expr := comp (("|" | "-" | "&") comp)*
    comp := atom (";" atom)*
    atom := REL "(" vars ";" vars ")"
          | "(" VAR "=" (VAR | CONST) ")"
          | "(" VAR ":=" (VAR | CONST) ")"
          | "(" expr ")"

Composition binds tighter than the set operators, which share one level and
associate to the left. ``a & b`` is sugar for ``a - (a - b)``.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass
from functools import reduce

from ..errors import ArityMismatch, BadRenaming, ConstantPlacementError
from ..model import Schema
from .lexer import TokenStream, quote


class Expr:
    """Base class of FLIF expressions."""

    __slots__ = ()

    def __str__(self) -> str:
        return print_flif(self)


@dataclass(frozen=True)
class RelAtom(Expr):
    """``R(x̄; ȳ)``; also used as the relation atom of FO formulas."""

    rel: str
    inputs: tuple[str, ...]
    outputs: tuple[str, ...]

    def __init__(self, rel: str, inputs: Iterable[str] = (), outputs: Iterable[str] = ()):
        object.__setattr__(self, "rel", rel)
        object.__setattr__(self, "inputs", tuple(inputs))
        object.__setattr__(self, "outputs", tuple(outputs))


@dataclass(frozen=True)
class EqTest(Expr):
    left: str
    right: str


@dataclass(frozen=True)
class ConstTest(Expr):
    var: str
    const: str


@dataclass(frozen=True)
class Assign(Expr):
    target: str
    source: str


@dataclass(frozen=True)
class ConstAssign(Expr):
    target: str
    const: str


@dataclass(frozen=True)
class Comp(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Union(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Diff(Expr):
    left: Expr
    right: Expr


ATOMS = (RelAtom, EqTest, ConstTest, Assign, ConstAssign)
BINARY = (Comp, Union, Diff)


def intersect(a: Expr, b: Expr) -> Expr:
    return Diff(a, Diff(a, b))


def compose(parts: Iterable[Expr]) -> Expr | None:
    """Left-nested composition of ``parts``; ``None`` when empty."""
    parts = list(parts)
    if not parts:
        return None
    return reduce(Comp, parts)


def then(first: Expr, *rest: Expr | None) -> Expr:
    """``first ; r1 ; r2 ...`` skipping ``None`` entries."""
    out = first
    for r in rest:
        if r is not None:
            out = Comp(out, r)
    return out


# -- traversal -------------------------------------------------------------


def subexpressions(e: Expr) -> Iterator[Expr]:
    """Post-order (leftmost-innermost first), ``e`` itself last."""
    if isinstance(e, BINARY):
        yield from subexpressions(e.left)
        yield from subexpressions(e.right)
    yield e


def variables(e: Expr) -> frozenset:
    if isinstance(e, RelAtom):
        return frozenset(e.inputs) | frozenset(e.outputs)
    if isinstance(e, EqTest):
        return frozenset((e.left, e.right))
    if isinstance(e, ConstTest):
        return frozenset((e.var,))
    if isinstance(e, Assign):
        return frozenset((e.target, e.source))
    if isinstance(e, ConstAssign):
        return frozenset((e.target,))
    return variables(e.left) | variables(e.right)


def constants(e: Expr) -> frozenset:
    return frozenset(
        s.const for s in subexpressions(e) if isinstance(s, (ConstTest, ConstAssign))
    )


def relations(e: Expr) -> frozenset:
    return frozenset(s.rel for s in subexpressions(e) if isinstance(s, RelAtom))


def size(e: Expr) -> int:
    """Number of AST nodes."""
    if isinstance(e, BINARY):
        return 1 + size(e.left) + size(e.right)
    return 1


def validate(e: Expr, schema: Schema) -> None:
    """Check every relation atom against ``schema``."""
    for s in subexpressions(e):
        if isinstance(s, RelAtom):
            sig = schema[s.rel]
            if len(s.inputs) != sig.input_arity or len(s.outputs) != sig.output_arity:
                raise ArityMismatch(
                    f"{print_flif(s)}: {s.rel} takes {sig.input_arity} inputs and "
                    f"{sig.output_arity} outputs"
                )


# -- renaming --------------------------------------------------------------


class Renaming(Mapping[str, str]):
    """A finite injective variable map.

    When applied it acts as the permutation obtained by closing each chain
    back onto its start, so ``{y: y1}`` also sends ``y1`` to ``y``.
    """

    def __init__(self, mapping: Mapping[str, str] = ()):
        m = dict(mapping)
        if len(set(m.values())) != len(m):
            raise BadRenaming(f"renaming {m} is not injective")
        self._map = m
        self._perm = self._close(m)

    @staticmethod
    def _close(m: dict) -> dict:
        perm = {k: v for k, v in m.items() if k != v}
        dangling = sorted(set(perm.values()) - set(perm))
        for end in dangling:
            start = end
            # walk back to the head of the chain
            inverse = {v: k for k, v in perm.items()}
            while start in inverse:
                start = inverse[start]
            perm[end] = start
        return perm

    def __getitem__(self, var: str) -> str:
        return self._map[var]

    def __iter__(self):
        return iter(self._map)

    def __len__(self):
        return len(self._map)

    def __repr__(self):
        return f"Renaming({self._map})"

    def __call__(self, var: str) -> str:
        return self._perm.get(var, var)

    @property
    def permutation(self) -> dict:
        return dict(self._perm)

    def image(self) -> frozenset:
        return frozenset(self._map.values())


def apply_renaming(theta: Renaming | Mapping[str, str], e: Expr) -> Expr:
    """Replace every variable occurrence ``x`` by ``theta(x)``."""
    if not isinstance(theta, Renaming):
        theta = Renaming(theta)
    return _rename(theta, e)


def _rename(t: Renaming, e: Expr) -> Expr:
    if isinstance(e, RelAtom):
        return RelAtom(e.rel, map(t, e.inputs), map(t, e.outputs))
    if isinstance(e, EqTest):
        return EqTest(t(e.left), t(e.right))
    if isinstance(e, ConstTest):
        return ConstTest(t(e.var), e.const)
    if isinstance(e, Assign):
        return Assign(t(e.target), t(e.source))
    if isinstance(e, ConstAssign):
        return ConstAssign(t(e.target), e.const)
    return type(e)(_rename(t, e.left), _rename(t, e.right))


# -- printing --------------------------------------------------------------


def _prec(e: Expr) -> int:
    if isinstance(e, (Union, Diff)):
        return 1
    if isinstance(e, Comp):
        return 2
    return 3


def print_flif(e: Expr) -> str:
    if isinstance(e, RelAtom):
        return f"{e.rel}({','.join(e.inputs)};{','.join(e.outputs)})"
    if isinstance(e, EqTest):
        return f"({e.left}={e.right})"
    if isinstance(e, ConstTest):
        return f"({e.var}={quote(e.const)})"
    if isinstance(e, Assign):
        return f"({e.target}:={e.source})"
    if isinstance(e, ConstAssign):
        return f"({e.target}:={quote(e.const)})"
    p = _prec(e)
    left = print_flif(e.left)
    if _prec(e.left) < p:
        left = f"({left})"
    right = print_flif(e.right)
    if _prec(e.right) <= p:
        right = f"({right})"
    op = {Comp: ";", Union: "|", Diff: "-"}[type(e)]
    return f"{left} {op} {right}"


# -- parsing ---------------------------------------------------------------


def parse_flif(text: str) -> Expr:
    ts = TokenStream(text)
    e = _expr(ts)
    ts.end()
    return e


def _expr(ts: TokenStream) -> Expr:
    e = _comp(ts)
    while True:
        if ts.accept("|"):
            e = Union(e, _comp(ts))
        elif ts.accept("-"):
            e = Diff(e, _comp(ts))
        elif ts.accept("&"):
            e = intersect(e, _comp(ts))
        else:
            return e


def _comp(ts: TokenStream) -> Expr:
    e = _atom(ts)
    while ts.accept(";"):
        e = Comp(e, _atom(ts))
    return e


def _varlist(ts: TokenStream, closer: str) -> tuple[str, ...]:
    out = []
    if ts.at(closer):
        return ()
    while True:
        if ts.peek().kind == "string":
            ts.error("constants are not allowed as relation arguments", cls=ConstantPlacementError)
        out.append(ts.ident("variable"))
        if not ts.accept(","):
            return tuple(out)


def _atom(ts: TokenStream) -> Expr:
    tok = ts.peek()
    if tok.kind == "ident" and ts.at("(", 1):
        rel = ts.next().text
        ts.expect("(")
        xs = _varlist(ts, ";")
        ts.expect(";")
        ys = _varlist(ts, ")")
        ts.expect(")")
        return RelAtom(rel, xs, ys)
    if ts.at("(") and ts.peek(1).kind == "string" and (ts.at("=", 2) or ts.at(":=", 2)):
        ts.error("a constant may only appear on the right of = or :=", ts.peek(1), cls=ConstantPlacementError)
    if ts.at("(") and ts.peek(1).kind == "ident" and (ts.at("=", 2) or ts.at(":=", 2)):
        ts.next()
        var = ts.next().text
        assign = ts.next().text == ":="
        rhs = ts.next()
        if rhs.kind == "ident":
            e = Assign(var, rhs.text) if assign else EqTest(var, rhs.text)
        elif rhs.kind == "string":
            e = ConstAssign(var, rhs.value) if assign else ConstTest(var, rhs.value)
        else:
            ts.error("expected a variable or a quoted constant", rhs)
        ts.expect(")")
        return e
    if ts.accept("("):
        e = _expr(ts)
        ts.expect(")")
        return e
    ts.error(f"unexpected {tok.text or 'end of input'!r}", tok)
