"""Relational algebra plans with access joins, and compilation of io-disjoint FLIF.

Plans work in the named perspective: every node produces a set of
valuations over a fixed set of variables. The special leaf :class:`In`
stands for the input relation. :class:`AccessJoin` is the only node that
names a database relation, and the interpreter reads it through
:func:`flif.model.access` only.

Text form, one constructor per node::

    In
    access(E, R(x;y))
    union(E, E)   minus(E, E)   join(E, E)
    project[x,y](E)
    gproject[x,y; z:=x](E)    gproject[x,y; z:="c"](E)
    select[x=y](E)            select[x="c"](E)
    let P = E in E            P
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field

from .analysis import io_profile, is_io_disjoint
from .errors import NotIoDisjoint, PlanTypeError
from .evaluate import ValuationSet
from .model import Instance, Valuation, access
from .names import FreshVarSource
from .syntax import flif as F
from .syntax.lexer import TokenStream, quote


class Plan:
    __slots__ = ()

    def __str__(self) -> str:
        return print_plan(self)


@dataclass(frozen=True)
class In(Plan):
    pass


@dataclass(frozen=True)
class Ref(Plan):
    name: str


@dataclass(frozen=True)
class AccessJoin(Plan):
    child: Plan
    rel: str
    inputs: tuple
    outputs: tuple

    def __init__(self, child: Plan, rel: str, inputs: Iterable[str] = (), outputs: Iterable[str] = ()):
        object.__setattr__(self, "child", child)
        object.__setattr__(self, "rel", rel)
        object.__setattr__(self, "inputs", tuple(inputs))
        object.__setattr__(self, "outputs", tuple(outputs))


@dataclass(frozen=True)
class PUnion(Plan):
    left: Plan
    right: Plan


@dataclass(frozen=True)
class Difference(Plan):
    left: Plan
    right: Plan


@dataclass(frozen=True)
class NaturalJoin(Plan):
    left: Plan
    right: Plan


@dataclass(frozen=True)
class Project(Plan):
    child: Plan
    keep: frozenset = field(default_factory=frozenset)

    def __init__(self, child: Plan, keep: Iterable[str]):
        object.__setattr__(self, "child", child)
        object.__setattr__(self, "keep", frozenset(keep))


@dataclass(frozen=True)
class GenProjectVar(Plan):
    """Keep ``keep`` and add ``target`` holding the value of ``source``."""

    child: Plan
    keep: frozenset
    target: str
    source: str

    def __init__(self, child: Plan, keep: Iterable[str], target: str, source: str):
        object.__setattr__(self, "child", child)
        object.__setattr__(self, "keep", frozenset(keep))
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "source", source)


@dataclass(frozen=True)
class GenProjectConst(Plan):
    child: Plan
    keep: frozenset
    target: str
    const: str

    def __init__(self, child: Plan, keep: Iterable[str], target: str, const: str):
        object.__setattr__(self, "child", child)
        object.__setattr__(self, "keep", frozenset(keep))
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "const", const)


@dataclass(frozen=True)
class SelectEq(Plan):
    child: Plan
    left: str
    right: str


@dataclass(frozen=True)
class SelectConst(Plan):
    child: Plan
    var: str
    const: str


@dataclass(frozen=True)
class Let(Plan):
    """Name the result of ``bound`` so ``body`` can refer to it more than once."""

    name: str
    bound: Plan
    body: Plan


_UNARY = (AccessJoin, Project, GenProjectVar, GenProjectConst, SelectEq, SelectConst)
_BINARY = (PUnion, Difference, NaturalJoin)


def children(p: Plan) -> tuple:
    if isinstance(p, _UNARY):
        return (p.child,)
    if isinstance(p, _BINARY):
        return (p.left, p.right)
    if isinstance(p, Let):
        return (p.bound, p.body)
    return ()


def nodes(p: Plan) -> Iterator[Plan]:
    """Pre-order traversal."""
    yield p
    for c in children(p):
        yield from nodes(c)


def node_count(p: Plan) -> int:
    return sum(1 for _ in nodes(p))


def substitute_in(q: Plan, p: Plan) -> Plan:
    """``q`` with every ``In`` leaf replaced by ``p``."""
    if isinstance(q, In):
        return p
    if isinstance(q, Ref):
        return q
    if isinstance(q, AccessJoin):
        return AccessJoin(substitute_in(q.child, p), q.rel, q.inputs, q.outputs)
    if isinstance(q, _BINARY):
        return type(q)(substitute_in(q.left, p), substitute_in(q.right, p))
    if isinstance(q, Project):
        return Project(substitute_in(q.child, p), q.keep)
    if isinstance(q, GenProjectVar):
        return GenProjectVar(substitute_in(q.child, p), q.keep, q.target, q.source)
    if isinstance(q, GenProjectConst):
        return GenProjectConst(substitute_in(q.child, p), q.keep, q.target, q.const)
    if isinstance(q, SelectEq):
        return SelectEq(substitute_in(q.child, p), q.left, q.right)
    if isinstance(q, SelectConst):
        return SelectConst(substitute_in(q.child, p), q.var, q.const)
    if isinstance(q, Let):
        return Let(q.name, substitute_in(q.bound, p), substitute_in(q.body, p))
    raise TypeError(f"not a plan: {q!r}")


# -- typing ----------------------------------------------------------------


@dataclass
class PlanSchemaReport:
    input_schema: frozenset
    output_schema: frozenset
    # (pre-order position, node, schema) for every node
    node_schemas: list = field(default_factory=list)


def plan_schema(p: Plan, I: Iterable[str], schema=None) -> PlanSchemaReport:
    """Output schema of every node; raises :class:`PlanTypeError` on the first bad one.

    When a database ``schema`` is given, access joins are also checked
    against the relation arities.
    """
    I = frozenset(I)
    report = PlanSchemaReport(I, frozenset())
    report.output_schema = _type(p, I, {}, schema, report.node_schemas)
    return report


def _type(p: Plan, I: frozenset, env: dict, schema, out: list) -> frozenset:
    slot = len(out)
    out.append(None)
    z = _type_node(p, I, env, schema, out)
    out[slot] = (slot, p, z)
    return z


def _type_node(p: Plan, I, env, schema, out) -> frozenset:
    if isinstance(p, In):
        return I
    if isinstance(p, Ref):
        if p.name not in env:
            raise PlanTypeError(p, f"unbound plan name {p.name}")
        return env[p.name]
    if isinstance(p, Let):
        z = _type(p.bound, I, env, schema, out)
        return _type(p.body, I, {**env, p.name: z}, schema, out)
    if isinstance(p, _BINARY):
        z1 = _type(p.left, I, env, schema, out)
        z2 = _type(p.right, I, env, schema, out)
        if isinstance(p, NaturalJoin):
            return z1 | z2
        if z1 != z2:
            raise PlanTypeError(p, f"operand schemas differ: {sorted(z1)} vs {sorted(z2)}")
        return z1
    z = _type(p.child, I, env, schema, out)
    if isinstance(p, AccessJoin):
        xs, ys = set(p.inputs), set(p.outputs)
        if schema is not None:
            sig = schema[p.rel]
            if len(p.inputs) != sig.input_arity or len(p.outputs) != sig.output_arity:
                raise PlanTypeError(p, f"{p.rel} expects {sig.input_arity} inputs and {sig.output_arity} outputs")
        if xs & ys:
            raise PlanTypeError(p, f"variables {sorted(xs & ys)} are both inputs and outputs")
        if not xs <= z:
            raise PlanTypeError(p, f"input variables {sorted(xs - z)} missing from {sorted(z)}")
        if ys & z:
            raise PlanTypeError(p, f"output variables {sorted(ys & z)} already in {sorted(z)}")
        return z | ys
    if isinstance(p, Project):
        if not p.keep <= z:
            raise PlanTypeError(p, f"cannot keep {sorted(p.keep - z)}")
        return p.keep
    if isinstance(p, (GenProjectVar, GenProjectConst)):
        if not p.keep <= z:
            raise PlanTypeError(p, f"cannot keep {sorted(p.keep - z)}")
        if p.target in p.keep:
            raise PlanTypeError(p, f"{p.target} is already kept")
        if isinstance(p, GenProjectVar) and p.source not in z:
            raise PlanTypeError(p, f"{p.source} is not available")
        return p.keep | {p.target}
    if isinstance(p, SelectEq):
        if p.left not in z or p.right not in z:
            raise PlanTypeError(p, "selection on a missing variable")
        return z
    if isinstance(p, SelectConst):
        if p.var not in z:
            raise PlanTypeError(p, "selection on a missing variable")
        return z
    raise TypeError(f"not a plan: {p!r}")


# -- evaluation ------------------------------------------------------------


def eval_plan(p: Plan, D: Instance, N) -> ValuationSet:
    """Evaluate ``p`` with ``In`` bound to ``N``.

    ``N`` is a :class:`ValuationSet` or an iterable of mappings; a plain
    iterable must be nonempty or carry its schema via ``ValuationSet``.
    """
    if not isinstance(N, ValuationSet):
        rows = [r if isinstance(r, Valuation) else Valuation(r) for r in N]
        if not rows:
            raise PlanTypeError(In(), "cannot infer the input schema of an empty list")
        N = ValuationSet(rows[0].domain, rows)
    z = plan_schema(p, N.schema, D.schema).output_schema
    return ValuationSet(z, _run(p, D, N.rows, {}))


def _run(p: Plan, D: Instance, N: frozenset, env: dict) -> frozenset:
    if isinstance(p, In):
        return N
    if isinstance(p, Ref):
        return env[p.name]
    if isinstance(p, Let):
        bound = _run(p.bound, D, N, env)
        return _run(p.body, D, N, {**env, p.name: bound})
    if isinstance(p, PUnion):
        return _run(p.left, D, N, env) | _run(p.right, D, N, env)
    if isinstance(p, Difference):
        return _run(p.left, D, N, env) - _run(p.right, D, N, env)
    if isinstance(p, NaturalJoin):
        return _join(_run(p.left, D, N, env), _run(p.right, D, N, env))
    rows = _run(p.child, D, N, env)
    if isinstance(p, AccessJoin):
        out = set()
        for nu in rows:
            for t in access(D, p.rel, tuple(nu[x] for x in p.inputs)):
                ext: dict = {}
                # a repeated output variable needs equal values in the tuple
                if all(ext.setdefault(y, c) == c for y, c in zip(p.outputs, t)):
                    out.add(nu.update(ext))
        return frozenset(out)
    if isinstance(p, Project):
        return frozenset(nu.restrict(p.keep) for nu in rows)
    if isinstance(p, GenProjectVar):
        return frozenset(nu.restrict(p.keep).extend(p.target, nu[p.source]) for nu in rows)
    if isinstance(p, GenProjectConst):
        return frozenset(nu.restrict(p.keep).extend(p.target, p.const) for nu in rows)
    if isinstance(p, SelectEq):
        return frozenset(nu for nu in rows if nu[p.left] == nu[p.right])
    if isinstance(p, SelectConst):
        return frozenset(nu for nu in rows if nu[p.var] == p.const)
    raise TypeError(f"not a plan: {p!r}")


def _join(left: frozenset, right: frozenset) -> frozenset:
    if not left or not right:
        return frozenset()
    common = sorted(next(iter(left)).domain & next(iter(right)).domain)
    index: dict = {}
    for nu in right:
        index.setdefault(tuple(nu[v] for v in common), []).append(nu)
    out = set()
    for nu in left:
        for mu in index.get(tuple(nu[v] for v in common), ()):
            out.add(nu.update(mu))
    return frozenset(out)


# -- compilation -----------------------------------------------------------


def compile_plan(alpha: F.Expr, input_schema: Iterable[str] | None = None) -> Plan:
    """Plan computing the answers of ``alpha`` for every input row.

    ``input_schema`` (default ``I(alpha)``) is the schema the plan will be
    run on; it must contain ``I(alpha)`` and avoid ``O(alpha)``. Each output
    row extends an input row with the values ``alpha`` produces from it.
    """
    verdict = is_io_disjoint(alpha)
    if not verdict:
        raise NotIoDisjoint(
            f"{F.print_flif(verdict.witness)} is not io-disjoint: {verdict.reason}", verdict.witness
        )
    prof = io_profile(alpha)
    Z = prof.inputs if input_schema is None else frozenset(input_schema)
    if not prof.inputs <= Z:
        raise PlanTypeError(In(), f"input schema misses {sorted(prof.inputs - Z)}")
    if Z & prof.outputs:
        raise PlanTypeError(In(), f"input schema contains outputs {sorted(Z & prof.outputs)}")
    return _compile(alpha, Z, FreshVarSource())


def _in_count(p: Plan) -> int:
    return sum(1 for n in nodes(p) if isinstance(n, In))


def _compile(e: F.Expr, Z: frozenset, names: FreshVarSource) -> Plan:
    if isinstance(e, F.RelAtom):
        return AccessJoin(In(), e.rel, e.inputs, e.outputs)
    if isinstance(e, F.EqTest):
        return SelectEq(In(), e.left, e.right)
    if isinstance(e, F.ConstTest):
        return SelectConst(In(), e.var, e.const)
    if isinstance(e, F.Assign):
        return GenProjectVar(In(), Z, e.target, e.source)
    if isinstance(e, F.ConstAssign):
        return GenProjectConst(In(), Z, e.target, e.const)
    p1, p2 = io_profile(e.left), io_profile(e.right)
    if isinstance(e, F.Comp):
        e1 = _compile(e.left, Z, names)
        z2 = (Z | p1.outputs) - p2.outputs
        first = e1 if not (p1.outputs & p2.outputs) else Project(e1, z2)
        e2 = _compile(e.right, z2, names)
        if _in_count(e2) <= 1:
            return substitute_in(e2, first)
        name = names.fresh("P")
        return Let(name, first, substitute_in(e2, Ref(name)))
    if isinstance(e, F.Union):
        return PUnion(_compile(e.left, Z, names), _compile(e.right, Z, names))
    if isinstance(e, F.Diff):
        e1 = _compile(e.left, Z, names)
        if not (Z & p2.outputs):
            return Difference(e1, _compile(e.right, Z, names))
        # recompute the right side without the overlapping columns, then
        # keep only rows that reproduce the given values
        z2 = Z - p2.outputs
        e2 = substitute_in(_compile(e.right, z2, names), Project(In(), z2))
        return Difference(e1, NaturalJoin(e2, In()))
    raise TypeError(f"not an FLIF expression: {e!r}")


# -- text form -------------------------------------------------------------


def _vars(vs) -> str:
    return ",".join(sorted(vs))


def print_plan(p: Plan) -> str:
    if isinstance(p, In):
        return "In"
    if isinstance(p, Ref):
        return p.name
    if isinstance(p, AccessJoin):
        return f"access({print_plan(p.child)}, {p.rel}({','.join(p.inputs)};{','.join(p.outputs)}))"
    if isinstance(p, PUnion):
        return f"union({print_plan(p.left)}, {print_plan(p.right)})"
    if isinstance(p, Difference):
        return f"minus({print_plan(p.left)}, {print_plan(p.right)})"
    if isinstance(p, NaturalJoin):
        return f"join({print_plan(p.left)}, {print_plan(p.right)})"
    if isinstance(p, Project):
        return f"project[{_vars(p.keep)}]({print_plan(p.child)})"
    if isinstance(p, GenProjectVar):
        return f"gproject[{_vars(p.keep)}; {p.target}:={p.source}]({print_plan(p.child)})"
    if isinstance(p, GenProjectConst):
        return f"gproject[{_vars(p.keep)}; {p.target}:={quote(p.const)}]({print_plan(p.child)})"
    if isinstance(p, SelectEq):
        return f"select[{p.left}={p.right}]({print_plan(p.child)})"
    if isinstance(p, SelectConst):
        return f"select[{p.var}={quote(p.const)}]({print_plan(p.child)})"
    if isinstance(p, Let):
        return f"let {p.name} = {print_plan(p.bound)} in {print_plan(p.body)}"
    raise TypeError(f"not a plan: {p!r}")


_KEYWORDS = {"In", "access", "union", "minus", "join", "project", "gproject", "select", "let", "in"}


def parse_plan(text: str) -> Plan:
    ts = TokenStream(text)
    p = _plan(ts)
    ts.end()
    return p


def _namelist(ts: TokenStream, closer: str) -> list:
    out = []
    if ts.at(closer):
        return out
    out.append(ts.ident("variable"))
    while ts.accept(","):
        out.append(ts.ident("variable"))
    return out


def _value(ts: TokenStream):
    """A variable name or a quoted constant; returns (is_const, text)."""
    tok = ts.peek()
    if tok.kind == "string":
        ts.next()
        return True, tok.value
    return False, ts.ident("variable or constant")


def _plan(ts: TokenStream) -> Plan:
    if ts.accept("("):
        p = _plan(ts)
        ts.expect(")")
        return p
    tok = ts.peek()
    word = ts.ident("plan")
    if word == "In":
        return In()
    if word == "let":
        name = ts.ident("plan name")
        if name in _KEYWORDS:
            ts.error(f"{name!r} cannot name a subplan", tok)
        ts.expect("=")
        bound = _plan(ts)
        if ts.ident("'in'") != "in":
            ts.error("expected 'in'")
        return Let(name, bound, _plan(ts))
    if word in ("union", "minus", "join"):
        ts.expect("(")
        a = _plan(ts)
        ts.expect(",")
        b = _plan(ts)
        ts.expect(")")
        return {"union": PUnion, "minus": Difference, "join": NaturalJoin}[word](a, b)
    if word == "access":
        ts.expect("(")
        child = _plan(ts)
        ts.expect(",")
        rel = ts.ident("relation name")
        ts.expect("(")
        xs = _namelist(ts, ";")
        ts.expect(";")
        ys = _namelist(ts, ")")
        ts.expect(")")
        ts.expect(")")
        return AccessJoin(child, rel, xs, ys)
    if word in ("project", "gproject", "select"):
        ts.expect("[")
        if word == "select":
            left = ts.ident("variable")
            ts.expect("=")
            is_const, right = _value(ts)
            ts.expect("]")
            child = _paren_child(ts)
            return SelectConst(child, left, right) if is_const else SelectEq(child, left, right)
        keep = _namelist(ts, ";" if word == "gproject" else "]")
        if word == "project":
            ts.expect("]")
            return Project(_paren_child(ts), keep)
        ts.expect(";")
        target = ts.ident("variable")
        ts.expect(":=")
        is_const, src = _value(ts)
        ts.expect("]")
        child = _paren_child(ts)
        if is_const:
            return GenProjectConst(child, keep, target, src)
        return GenProjectVar(child, keep, target, src)
    if word in _KEYWORDS:
        ts.error(f"unexpected {word!r}", tok)
    return Ref(word)


def _paren_child(ts: TokenStream) -> Plan:
    ts.expect("(")
    p = _plan(ts)
    ts.expect(")")
    return p
