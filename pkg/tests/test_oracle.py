import json
import random

import pytest

from flif.analysis import is_io_disjoint
from flif.dbfile import database_to_json
from flif.errors import BudgetExceeded
from flif.evaluate import eval_flif_v, in_sem
from flif.model import Instance, Schema, Valuation
from flif.oracle import (
    GenConfig,
    PairSet,
    brute_pairs,
    candidate_domain,
    gen_flif,
    gen_flif_io,
    gen_instance,
    gen_schema,
    gen_valuation,
    semantic_violations,
    var_pool,
)
from flif.syntax.flif import (
    Assign,
    Comp,
    ConstAssign,
    ConstTest,
    Diff,
    EqTest,
    RelAtom,
    Union,
    parse_flif,
    subexpressions,
)


def test_bus_atom_pairs(bus):
    P = brute_pairs(parse_flif("B(x;x)"), ["x"], bus, [str(i) for i in range(1, 6)])
    assert {(a["x"], b["x"]) for a, b in P} == {("1", "2"), ("1", "3"), ("2", "3"), ("3", "5")}
    P = brute_pairs(parse_flif("(x=z)"), ["x", "z"], bus, [str(i) for i in range(1, 6)])
    assert all(a == b and a["x"] == a["z"] for a, b in P)
    assert len(P) == 5


def test_candidate_domain_adds_two_fresh(bus):
    assert candidate_domain(bus) == ["1", "2", "3", "4", "5", "#0", "#1"]
    assert candidate_domain(bus, ["#0"]) == ["#0", "1", "2", "3", "4", "5", "#1", "#2"]


def test_brute_pairs_budget_and_domain(bus):
    with pytest.raises(BudgetExceeded):
        brute_pairs(parse_flif("B(x;y)"), ["x", "y", "z", "u"], bus, budget=100)
    with pytest.raises(ValueError):
        brute_pairs(parse_flif("B(x;y)"), ["x", "y"], bus, ["1", "2"])
    with pytest.raises(ValueError):
        brute_pairs(parse_flif("B(x;y)"), ["x"], bus)


def test_slices_match_eval_and_in_sem():
    cfg = GenConfig(max_vars=3, max_adom=3)
    rng = random.Random(60)
    for _ in range(60):
        schema = gen_schema(cfg, rng)
        D = gen_instance(cfg, schema, rng)
        e = gen_flif(cfg, schema, rng)
        V = var_pool(cfg)
        P = brute_pairs(e, V, D)
        slices = {}
        for a, b in P:
            slices.setdefault(a, set()).add(b)
        for _ in range(8):
            nu = gen_valuation(cfg, V, rng, domain=P.cand)
            assert set(eval_flif_v(e, V, D, nu).rows) == slices.get(nu, set())
        for a, b in list(P)[:10]:
            assert in_sem(e, V, D, a, b)


def test_semantic_properties_hold():
    cfg = GenConfig(max_vars=3, max_adom=3)
    rng = random.Random(61)
    for _ in range(150):
        schema = gen_schema(cfg, rng)
        D = gen_instance(cfg, schema, rng)
        e = gen_flif_io(cfg, schema, rng) if rng.random() < 0.5 else gen_flif(cfg, schema, rng)
        V = var_pool(cfg) + ("p",)
        assert semantic_violations(e, brute_pairs(e, V, D)) == []


def test_property_checker_catches_broken_relations(bus):
    alpha = parse_flif("B(x;y)")
    P = brute_pairs(alpha, ["x", "y"], bus)
    a, b = next(iter(P.pairs))
    # changing x breaks inertia
    bad = PairSet(P.vars, P.cand, set(P.pairs) | {(a, ("#1", b[1]))})
    assert any(p.startswith("inertia") for p in semantic_violations(alpha, bad))
    # dropping one pair breaks determinacy
    fewer = PairSet(P.vars, P.cand, set(P.pairs) - {(a, b)})
    assert semantic_violations(alpha, fewer)
    # identity: drop the pairs whose target is already a fixpoint
    e = parse_flif("R(x;y)")
    D = Instance(Schema({"R": (2, 1)}), {"R": [("1", "2")]})
    P = brute_pairs(e, ["x", "y"], D)
    assert semantic_violations(e, P) == []
    broken = PairSet(P.vars, P.cand, {(a, b) for a, b in P.pairs if a != b})
    assert any("identity" in p for p in semantic_violations(e, broken))


def test_generation_is_deterministic():
    cfg = GenConfig(seed=7)
    one = json.dumps(database_to_json(gen_instance(cfg)), sort_keys=True)
    two = json.dumps(database_to_json(gen_instance(cfg)), sort_keys=True)
    assert one == two
    r1, r2 = random.Random(7), random.Random(7)
    s1, s2 = gen_schema(cfg, r1), gen_schema(cfg, r2)
    assert s1 == s2
    assert gen_flif(cfg, s1, r1) == gen_flif(cfg, s2, r2)


def test_gen_flif_io_always_io_disjoint():
    cfg = GenConfig()
    rng = random.Random(62)
    for _ in range(1000):
        e = gen_flif_io(cfg, gen_schema(cfg, rng), rng)
        assert is_io_disjoint(e)


def test_gen_flif_covers_all_constructors():
    cfg = GenConfig(max_depth=4)
    rng = random.Random(63)
    seen = set()
    for _ in range(200):
        e = gen_flif(cfg, gen_schema(cfg, rng), rng, depth=4)
        seen |= {type(s) for s in subexpressions(e)}
    assert seen == {RelAtom, EqTest, ConstTest, Assign, ConstAssign, Comp, Union, Diff}


def test_gen_valuation_domain():
    cfg = GenConfig()
    nu = gen_valuation(cfg, ["x", "y"], random.Random(1), domain=["a"])
    assert nu == Valuation({"x": "a", "y": "a"})


def test_config_bounds():
    with pytest.raises(ValueError):
        GenConfig(max_adom=0)
