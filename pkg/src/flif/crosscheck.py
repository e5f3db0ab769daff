"""Differential self-check of one expression on one database.

Every applicable engine is run on the same inputs and compared against the
reference evaluator. A failing check reports the two engines that disagree
and the smallest input valuation (in sorted order) that shows it.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .analysis import io_profile, is_io_disjoint
from .errors import BudgetExceeded
from .evaluate import ValuationSet, eval_exfo, eval_flif, eval_flif_v, in_sem
from .model import Instance, Valuation
from .names import FreshVarSource
from .oracle import brute_pairs, candidate_domain, semantic_violations
from .plan import compile_plan, eval_plan
from .syntax.flif import Expr, constants, variables
from .translate import (
    default_renaming,
    flif_to_exfo_3n,
    flifio_to_exfo,
    rewrite_io_disjoint,
)


@dataclass
class CheckResult:
    name: str
    engines: tuple
    ok: bool
    witness: Valuation | None = None
    detail: str = ""

    def line(self) -> str:
        if self.ok:
            return f"ok    {self.name}"
        where = f" on input {self.witness!r}" if self.witness is not None else ""
        return f"FAIL  {self.name}: {self.engines[0]} and {self.engines[1]} disagree{where}. {self.detail}".rstrip()


def _inputs(V, cand, limit: int, rng: random.Random) -> list[Valuation]:
    V = sorted(V)
    total = len(cand) ** len(V)
    if total <= limit:
        rows = itertools.product(cand, repeat=len(V))
        return [Valuation(zip(V, r)) for r in rows]
    picked = {tuple(rng.choice(cand) for _ in V) for _ in range(limit)}
    return sorted((Valuation(zip(V, r)) for r in picked), key=Valuation.sort_key)


def _first(items, pred):
    for it in items:
        if pred(it):
            return it
    return None


def run_checks(alpha: Expr, D: Instance, seed: int = 0, limit: int = 400) -> list[CheckResult]:
    rng = random.Random(seed)
    V = sorted(variables(alpha))
    cand = candidate_domain(D, constants(alpha))
    inputs = _inputs(V, cand, limit, rng)
    reference = {nu: eval_flif_v(alpha, V, D, nu) for nu in inputs}
    results = []

    # 1. brute-force oracle
    try:
        P = brute_pairs(alpha, V, D, cand)
    except BudgetExceeded as exc:
        P = None
        results.append(CheckResult("oracle", ("eval", "brute_pairs"), True, detail=f"skipped: {exc}"))
    if P is not None:
        slices: dict = {}
        for a, b in P.pairs:
            slices.setdefault(a, set()).add(b)
        key = lambda nu: tuple(nu[v] for v in P.vars)  # noqa: E731

        def oracle_bad(nu):
            want = {Valuation(zip(P.vars, b)) for b in slices.get(key(nu), ())}
            return set(reference[nu].rows) != want

        bad = _first(inputs, oracle_bad)
        results.append(CheckResult("oracle", ("eval", "brute_pairs"), bad is None, bad))

    # 2. pair membership
    def in_sem_bad(nu):
        got = reference[nu].rows
        probes = list(got) + [Valuation(zip(V, (rng.choice(cand) for _ in V))) for _ in range(4)]
        return any(in_sem(alpha, V, D, nu, nu2) != (nu2 in got) for nu2 in probes)

    bad = _first(inputs[: max(1, limit // 4)], in_sem_bad)
    results.append(CheckResult("pair membership", ("eval", "in_sem"), bad is None, bad))

    # 3. semantic properties of the full pair relation
    if P is not None:
        problems = semantic_violations(alpha, P)
        results.append(CheckResult("semantic properties", ("brute_pairs", "properties"),
                                   not problems, detail="; ".join(problems)))

    # 4. three-copy FO translation
    vx = V or ["x"]
    names = FreshVarSource(vx)
    vy = [names.fresh("y") for _ in vx]
    vz = [names.fresh("z") for _ in vx]
    phi = flif_to_exfo_3n(alpha, vx, vy, vz)

    def bounded_bad(nu):
        nu = nu if V else Valuation({"x": cand[0]})
        got = {Valuation({v: r[w] for v, w in zip(vx, vy)}) for r in eval_exfo(phi, vx, D, nu)}
        return got != set(eval_flif_v(alpha, vx, D, nu).rows)

    bad = _first(inputs, bounded_bad)
    results.append(CheckResult("flif2fo3n", ("eval", "eval_exfo"), bad is None, bad))

    # 5. io-disjoint rewriting when needed
    target = alpha
    if not is_io_disjoint(alpha):
        rho = default_renaming(alpha)
        beta = rewrite_io_disjoint(alpha, rho)
        extra = sorted(variables(beta) - set(V))
        Vb = sorted(set(V) | set(extra))

        def rewrite_bad(nu):
            start = nu.update({v: cand[-1] for v in extra})
            lhs = {r.restrict(rho) for r in reference[nu]}
            rhs = {Valuation({y: r[rho[y]] for y in rho}) for r in eval_flif_v(beta, Vb, D, start)}
            return lhs != rhs

        bad = _first(inputs, rewrite_bad)
        results.append(CheckResult("rewrite", ("eval", "rewritten eval"), bad is None, bad))
        target = beta

    # 6. improved FO translation and 7. plan, on the io-disjoint version
    prof = io_profile(target)
    ins = sorted(prof.inputs)
    seen, starts = set(), []
    for nu in inputs:
        r = nu.restrict(ins)
        if r not in seen:
            seen.add(r)
            starts.append(r)
    fo = flifio_to_exfo(target)
    expected = {nu: eval_flif(target, D, nu) for nu in starts}
    bad = _first(starts, lambda nu: eval_exfo(fo, ins, D, nu) != expected[nu])
    results.append(CheckResult("flifio2fo", ("eval", "eval_exfo"), bad is None, bad))

    plan = compile_plan(target)
    got = eval_plan(plan, D, ValuationSet(ins, starts))
    want = ValuationSet(prof.vars, (r for s in starts for r in expected[s]))
    bad = None
    if got != want:
        bad = _first(starts, lambda nu: eval_plan(plan, D, ValuationSet(ins, [nu])) != expected[nu])
    results.append(CheckResult("plan", ("eval", "eval_plan"), got == want, bad))
    return results

