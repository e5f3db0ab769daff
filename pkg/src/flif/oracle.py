"""Brute-force semantics and seeded random generators for differential testing.

:func:`brute_pairs` computes the full pair relation of an FLIF expression
over a finite candidate domain by enumerating every valuation, which is
exponential but shares no code with the evaluators in :mod:`flif.evaluate`.
"""

from __future__ import annotations

import itertools
import random
from collections import Counter
from collections.abc import Iterable, Mapping
from dataclasses import dataclass

from .analysis import exec_check, io_profile, is_io_disjoint
from .errors import BudgetExceeded
from .model import Instance, Schema, Signature, Valuation, adom
from .syntax import flif as F
from .syntax import fo as FO
from .syntax.flif import RelAtom, constants, variables

BUDGET = 10**6


@dataclass(frozen=True)
class GenConfig:
    max_relations: int = 3
    max_arity: int = 3
    max_adom: int = 5
    max_depth: int = 4
    max_vars: int = 4
    max_tuples: int = 8
    seed: int = 0

    def __post_init__(self):
        for name in ("max_relations", "max_adom", "max_depth", "max_vars", "max_tuples"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be at least 1")
        if self.max_arity < 0:
            raise ValueError("max_arity must be non-negative")

    def rng(self, salt: int = 0) -> random.Random:
        return random.Random(self.seed * 1_000_003 + salt)


VAR_POOL = ("x", "y", "z", "u", "w", "v")


def var_pool(cfg: GenConfig) -> tuple:
    return VAR_POOL[: min(cfg.max_vars, len(VAR_POOL))]


def data_domain(cfg: GenConfig) -> list:
    return [str(i) for i in range(1, cfg.max_adom + 1)]


def candidate_domain(D: Instance, extra: Iterable[str] = ()) -> list:
    """adom(D) plus ``extra`` plus two constants occurring in neither."""
    base = set(adom(D)) | set(extra)
    fresh = []
    k = 0
    while len(fresh) < 2:
        c = f"#{k}"
        if c not in base:
            fresh.append(c)
        k += 1
    return sorted(base) + fresh


# -- brute-force pair semantics ----------------------------------------------


class PairSet:
    """Pairs of valuations over a fixed variable order, stored as value tuples."""

    def __init__(self, V: Iterable[str], cand: Iterable[str], pairs: set):
        self.vars = tuple(sorted(V))
        self.cand = tuple(cand)
        self.pairs = pairs

    def __len__(self):
        return len(self.pairs)

    def __iter__(self):
        for a, b in self.pairs:
            yield Valuation(zip(self.vars, a)), Valuation(zip(self.vars, b))

    def __contains__(self, pair):
        a, b = pair
        return (tuple(a[v] for v in self.vars), tuple(b[v] for v in self.vars)) in self.pairs

    def from_left(self, nu: Mapping[str, str]) -> set:
        key = tuple(nu[v] for v in self.vars)
        return {Valuation(zip(self.vars, b)) for a, b in self.pairs if a == key}

    def as_valuations(self) -> set:
        return set(self)


def brute_pairs(alpha: F.Expr, V: Iterable[str], D: Instance, cand: Iterable[str] | None = None,
                budget: int = BUDGET) -> PairSet:
    """Every pair in the semantics of ``alpha`` over ``V`` with values in ``cand``.

    ``cand`` defaults to :func:`candidate_domain` with the constants of
    ``alpha``; it must contain adom(D) and those constants.
    """
    V = tuple(sorted(set(V)))
    if variables(alpha) - set(V):
        raise ValueError("expression uses variables outside V")
    cand = tuple(candidate_domain(D, constants(alpha)) if cand is None else cand)
    missing = (adom(D) | constants(alpha)) - set(cand)
    if missing:
        raise ValueError(f"candidate domain misses {sorted(missing)}")
    if len(cand) ** len(V) > budget:
        raise BudgetExceeded(f"{len(cand)}^{len(V)} valuations exceed the budget {budget}")
    space = list(itertools.product(cand, repeat=len(V)))
    pos = {v: i for i, v in enumerate(V)}
    pairs = _pairs(alpha, D, space, pos, budget)
    return PairSet(V, cand, pairs)


def _pairs(e: F.Expr, D: Instance, space: list, pos: dict, budget: int) -> set:
    if isinstance(e, RelAtom):
        i = D.schema.iar(e.rel)
        out = set()
        xi = [pos[x] for x in e.inputs]
        by_input: dict = {}
        for a in space:
            by_input.setdefault(tuple(a[p] for p in xi), []).append(a)
        # full scan of the relation, deliberately not using the access index
        for t in D.relations[e.rel]:
            ins, outs = t[:i], t[i:]
            bind = {}
            if any(bind.setdefault(y, c) != c for y, c in zip(e.outputs, outs)):
                continue
            for a in by_input.get(ins, ()):
                b = list(a)
                for y, c in bind.items():
                    b[pos[y]] = c
                out.add((a, tuple(b)))
        return out
    if isinstance(e, F.EqTest):
        l, r = pos[e.left], pos[e.right]
        return {(a, a) for a in space if a[l] == a[r]}
    if isinstance(e, F.ConstTest):
        p = pos[e.var]
        return {(a, a) for a in space if a[p] == e.const}
    if isinstance(e, (F.Assign, F.ConstAssign)):
        p = pos[e.target]
        out = set()
        for a in space:
            b = list(a)
            b[p] = a[pos[e.source]] if isinstance(e, F.Assign) else e.const
            out.add((a, tuple(b)))
        return out
    left = _pairs(e.left, D, space, pos, budget)
    right = _pairs(e.right, D, space, pos, budget)
    if isinstance(e, F.Union):
        out = left | right
    elif isinstance(e, F.Diff):
        out = left - right
    elif isinstance(e, F.Comp):
        succ: dict = {}
        for b, c in right:
            succ.setdefault(b, []).append(c)
        out = set()
        for a, b in left:
            for c in succ.get(b, ()):
                out.add((a, c))
                if len(out) > budget:
                    raise BudgetExceeded(f"more than {budget} pairs")
    else:
        raise TypeError(f"not an FLIF expression: {e!r}")
    if len(out) > budget:
        raise BudgetExceeded(f"more than {budget} pairs")
    return out


# -- semantic properties ------------------------------------------------------


def semantic_violations(alpha: F.Expr, P: PairSet) -> list[str]:
    """Check the inertia, free-variable, determinacy and identity properties.

    ``P`` must be the complete pair relation over its candidate domain, as
    returned by :func:`brute_pairs`. Returns human-readable violations.
    """
    prof = io_profile(alpha)
    idx = {v: i for i, v in enumerate(P.vars)}
    n = len(P.cand)
    allv = set(P.vars)
    O = [idx[v] for v in sorted(prof.outputs)]
    I = [idx[v] for v in sorted(prof.inputs)]
    Vs = [idx[v] for v in sorted(prof.vars)]
    notO = [i for i in range(len(P.vars)) if i not in O]
    problems = []

    def pick(t, ix):
        return tuple(map(t.__getitem__, ix))

    for a, b in P.pairs:
        if pick(a, notO) != pick(b, notO):
            problems.append(f"inertia: {dict(zip(P.vars, a))} -> {dict(zip(P.vars, b))}")
            break
    if problems:
        return problems

    # free variables: the relation is a full cylinder outside vars(alpha)
    outside = len(allv - prof.vars)
    cyl = Counter((pick(a, Vs), pick(b, Vs)) for a, b in P.pairs)
    bad = [k for k, c in cyl.items() if c != n**outside]
    if bad:
        problems.append(f"free-variable property fails for vars(alpha) part {bad[0]}")

    # determinacy: every completion of the inputs reaches the same outputs
    free_inputs = len(allv - prof.inputs)
    det = Counter((pick(a, I), pick(b, O)) for a, b in P.pairs)
    bad = [k for k, c in det.items() if c != n**free_inputs]
    if bad:
        problems.append(f"input-output determinacy fails for inputs/outputs {bad[0]}")

    # alternative form: values on O(alpha) - I(alpha) at the start are irrelevant
    keep = [i for i in range(len(P.vars)) if i in I or i not in O]
    alt = Counter((pick(a, keep), b) for a, b in P.pairs)
    bad = [k for k, c in alt.items() if c != n ** len(prof.outputs - prof.inputs)]
    if bad:
        problems.append(f"determinacy (alternative form) fails at {bad[0]}")

    if is_io_disjoint(alpha):
        for a, b in P.pairs:
            if (b, b) not in P.pairs:
                problems.append(f"identity property fails at {dict(zip(P.vars, b))}")
                break
    return problems


# -- brute-force first-order satisfaction ------------------------------------


def fo_satisfies(f, D: Instance, nu: Mapping[str, str], cand: Iterable[str]) -> bool:
    """Tarskian satisfaction with quantifiers ranging over ``cand``."""
    cand = tuple(cand)
    return _sat(f, D, dict(nu), cand)


def _sat(f, D: Instance, nu: dict, cand: tuple) -> bool:
    if isinstance(f, RelAtom):
        return tuple(nu[v] for v in f.inputs + f.outputs) in D.relations[f.rel]
    if isinstance(f, FO.Eq):
        return nu[f.left] == nu[f.right]
    if isinstance(f, FO.EqConst):
        return nu[f.var] == f.const
    if isinstance(f, FO.And):
        return _sat(f.left, D, nu, cand) and _sat(f.right, D, nu, cand)
    if isinstance(f, FO.Or):
        return _sat(f.left, D, nu, cand) or _sat(f.right, D, nu, cand)
    if isinstance(f, FO.Not):
        return not _sat(f.body, D, nu, cand)
    if isinstance(f, FO.Exists):
        return any(_sat(f.body, D, {**nu, f.var: c}, cand) for c in cand)
    raise TypeError(f"not a formula: {f!r}")


def brute_eval_exfo(phi, V: Iterable[str], D: Instance, nu_in: Mapping[str, str],
                    cand: Iterable[str] | None = None) -> set:
    """Extensions of ``nu_in`` to ``V ∪ FV(phi)`` satisfying ``phi``, by enumeration."""
    V = frozenset(V)
    base = dict(nu_in)
    if cand is None:
        cand = candidate_domain(D, set(FO.fo_constants(phi)) | set(base.values()))
    cand = tuple(cand)
    extra = sorted(FO.free_vars(phi) - V)
    out = set()
    for values in itertools.product(cand, repeat=len(extra)):
        nu = {**base, **dict(zip(extra, values))}
        if _sat(phi, D, nu, cand):
            out.add(Valuation(nu))
    return out


# -- generators -------------------------------------------------------------


def gen_schema(cfg: GenConfig, rng: random.Random) -> Schema:
    names = ["R", "S", "T"][: max(1, min(cfg.max_relations, 3))]
    if cfg.max_relations > 3:
        names += [f"R{i}" for i in range(cfg.max_relations - 3)]
    k = rng.randint(1, len(names))
    entries = {}
    for i, name in enumerate(names[:k]):
        arity = rng.randint(1 if i == 0 else 0, max(cfg.max_arity, 1 if i == 0 else 0))
        entries[name] = Signature(arity, rng.randint(0, arity))
    return Schema(entries)


def gen_instance(cfg: GenConfig, schema: Schema | None = None, rng: random.Random | None = None) -> Instance:
    rng = rng or cfg.rng(1)
    schema = schema or gen_schema(cfg, rng)
    dom = data_domain(cfg)
    rels = {}
    for name in sorted(schema):
        arity = schema[name].arity
        if arity == 0:
            rels[name] = {()} if rng.random() < 0.5 else set()
            continue
        count = rng.randint(0, cfg.max_tuples)
        rels[name] = {tuple(rng.choice(dom) for _ in range(arity)) for _ in range(count)}
    return Instance(schema, rels)


def _gen_atom(schema: Schema, pool, rng: random.Random, consts) -> F.Expr:
    kind = rng.choice(["rel", "rel", "rel", "eq", "eqc", "asg", "asgc"])
    if kind == "rel":
        name = rng.choice(sorted(schema))
        sig = schema[name]
        return RelAtom(name, [rng.choice(pool) for _ in range(sig.input_arity)],
                       [rng.choice(pool) for _ in range(sig.output_arity)])
    x, y = rng.choice(pool), rng.choice(pool)
    if kind == "eq":
        return F.EqTest(x, y)
    if kind == "eqc":
        return F.ConstTest(x, rng.choice(consts))
    if kind == "asg":
        return F.Assign(x, y)
    return F.ConstAssign(x, rng.choice(consts))


def gen_flif(cfg: GenConfig, schema: Schema, rng: random.Random, depth: int | None = None,
             pool=None) -> F.Expr:
    """Random expression over ``schema`` of depth at most ``depth``."""
    depth = cfg.max_depth if depth is None else depth
    pool = tuple(pool or var_pool(cfg))
    consts = data_domain(cfg)[:2]
    if depth <= 0 or rng.random() < 0.3:
        return _gen_atom(schema, pool, rng, consts)
    op = rng.choice([F.Comp, F.Comp, F.Union, F.Diff])
    return op(gen_flif(cfg, schema, rng, depth - 1, pool), gen_flif(cfg, schema, rng, depth - 1, pool))


def gen_flif_io(cfg: GenConfig, schema: Schema, rng: random.Random, depth: int | None = None,
                pool=None) -> F.Expr:
    """Random io-disjoint expression, built so that every step stays io-disjoint."""
    depth = cfg.max_depth if depth is None else depth
    pool = tuple(pool or var_pool(cfg))
    e = _gen_io(cfg, schema, rng, depth, pool, frozenset())
    assert is_io_disjoint(e), F.print_flif(e)
    return e


def _io_atom(schema: Schema, rng: random.Random, pool, banned: frozenset, consts) -> F.Expr:
    """Io-disjoint atom whose outputs avoid ``banned``."""
    allowed = [v for v in pool if v not in banned]
    for _ in range(8):
        kind = rng.choice(["rel", "rel", "rel", "eq", "eqc", "asg", "asgc"])
        if kind == "rel":
            name = rng.choice(sorted(schema))
            sig = schema[name]
            ins = [rng.choice(pool) for _ in range(sig.input_arity)]
            outs_pool = [v for v in allowed if v not in ins]
            if sig.output_arity and not outs_pool:
                continue
            return RelAtom(name, ins, [rng.choice(outs_pool) for _ in range(sig.output_arity)])
        if kind == "eq":
            return F.EqTest(rng.choice(pool), rng.choice(pool))
        if kind == "eqc":
            return F.ConstTest(rng.choice(pool), rng.choice(consts))
        if not allowed:
            continue
        target = rng.choice(allowed)
        if kind == "asgc":
            return F.ConstAssign(target, rng.choice(consts))
        sources = [v for v in pool if v != target]
        if sources:
            return F.Assign(target, rng.choice(sources))
    return F.EqTest(pool[0], pool[0])


def _pad(e: F.Expr, missing: Iterable[str], rng: random.Random, avoid: frozenset, pool, consts) -> F.Expr:
    """Compose ``e`` with assignments giving it the extra outputs ``missing``."""
    parts = [e]
    sources = [v for v in pool if v not in avoid]
    for y in sorted(missing):
        if sources and rng.random() < 0.5:
            parts.append(F.Assign(y, rng.choice(sources)))
        else:
            parts.append(F.ConstAssign(y, rng.choice(consts)))
    return F.compose(parts)


def _gen_io(cfg, schema, rng, depth, pool, banned: frozenset) -> F.Expr:
    consts = data_domain(cfg)[:2]
    if depth <= 0 or rng.random() < 0.3:
        return _io_atom(schema, rng, pool, banned, consts)
    op = rng.choice(["comp", "comp", "union", "diff"])
    for _ in range(4):
        a1 = _gen_io(cfg, schema, rng, depth - 1, pool, banned)
        p1 = io_profile(a1)
        a2 = _gen_io(cfg, schema, rng, depth - 1, pool, banned | p1.inputs)
        p2 = io_profile(a2)
        if op == "comp":
            return F.Comp(a1, a2)
        if p2.inputs & p1.outputs:
            continue
        # padding sources must not be outputs of the result
        outs = p1.outputs | p2.outputs
        if op == "union":
            b1 = _pad(a1, p2.outputs - p1.outputs, rng, outs | banned, pool, consts)
            b2 = _pad(a2, p1.outputs - p2.outputs, rng, outs | banned, pool, consts)
            e = F.Union(b1, b2)
        else:
            e = F.Diff(a1, _pad(a2, p1.outputs - p2.outputs, rng, outs | banned, pool, consts))
        if is_io_disjoint(e):
            return e
    return _io_atom(schema, rng, pool, banned, consts)


def gen_exfo(cfg: GenConfig, schema: Schema, rng: random.Random, V: Iterable[str],
             depth: int | None = None, pool=None):
    """Random formula that is executable for ``V``."""
    depth = cfg.max_depth if depth is None else depth
    pool = tuple(pool or var_pool(cfg))
    f = _gen_fo(cfg, schema, rng, depth, pool, frozenset(V))
    assert exec_check(f, V), FO.print_fo(f)
    return f


def _fo_atom(schema, rng, pool, B: frozenset, consts):
    for _ in range(8):
        kind = rng.choice(["rel", "rel", "rel", "eq", "eqc"])
        if kind == "rel":
            name = rng.choice(sorted(schema))
            sig = schema[name]
            if sig.input_arity and not B:
                continue
            bound = sorted(B)
            return RelAtom(name, [rng.choice(bound) for _ in range(sig.input_arity)],
                           [rng.choice(pool) for _ in range(sig.output_arity)])
        if kind == "eq" and B:
            return FO.Eq(rng.choice(sorted(B)), rng.choice(pool))
        if kind == "eqc":
            return FO.EqConst(rng.choice(pool), rng.choice(consts))
    return FO.EqConst(rng.choice(pool), rng.choice(consts))


def _gen_fo(cfg, schema, rng, depth, pool, B: frozenset):
    consts = data_domain(cfg)[:2]
    if depth <= 0 or rng.random() < 0.3:
        return _fo_atom(schema, rng, pool, B, consts)
    op = rng.choice(["and", "and", "or", "not", "exists"])
    if op == "and":
        f1 = _gen_fo(cfg, schema, rng, depth - 1, pool, B)
        return FO.And(f1, _gen_fo(cfg, schema, rng, depth - 1, pool, B | FO.free_vars(f1)))
    if op == "or":
        f1 = _gen_fo(cfg, schema, rng, depth - 1, pool, B)
        f2 = _gen_fo(cfg, schema, rng, depth - 1, pool, B)
        # give each side the free variables only the other side has
        for v in sorted((FO.free_vars(f2) - FO.free_vars(f1)) - B):
            f1 = FO.And(f1, FO.EqConst(v, rng.choice(consts)))
        for v in sorted((FO.free_vars(f1) - FO.free_vars(f2)) - B):
            f2 = FO.And(f2, FO.EqConst(v, rng.choice(consts)))
        return FO.Or(f1, f2)
    if op == "not":
        if B:
            inner = tuple(sorted(B))
            return FO.Not(_gen_fo(cfg, schema, rng, depth - 1, inner, B))
        return FO.And(FO.EqConst(rng.choice(pool), rng.choice(consts)),
                      _gen_fo(cfg, schema, rng, depth - 1, pool, B))
    x = rng.choice(pool)
    return FO.Exists(x, _gen_fo(cfg, schema, rng, depth - 1, pool, B - {x}))


def gen_valuation(cfg: GenConfig, variables: Iterable[str], rng: random.Random,
                  domain: Iterable[str] | None = None) -> Valuation:
    dom = list(domain) if domain is not None else data_domain(cfg)
    return Valuation({v: rng.choice(dom) for v in sorted(variables)})
