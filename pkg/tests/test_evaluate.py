import random

import pytest

from flif.analysis import io_profile, is_io_disjoint
from flif.errors import (
    InputDomainMismatch,
    NotExecutable,
    UnboundVariable,
    UnknownRelation,
)
from flif.evaluate import (
    PADDING,
    ValuationSet,
    eval_exfo,
    eval_flif,
    eval_flif_many,
    eval_flif_v,
    in_sem,
)
from flif.model import Instance, Schema, Valuation, adom
from flif.oracle import (
    GenConfig,
    brute_eval_exfo,
    candidate_domain,
    gen_exfo,
    gen_flif,
    gen_flif_io,
    gen_instance,
    gen_schema,
    gen_valuation,
    var_pool,
)
from flif.syntax.flif import constants, parse_flif, variables
from flif.syntax.fo import parse_fo

XYZ = ("x", "y", "z")


def rows(vs):
    return [dict(r) for r in sorted(vs, key=Valuation.sort_key)]


def test_bus_train_from_v_valuation(bus):
    got = eval_flif_v(parse_flif("B(x;y) ; T(y;x)"), XYZ, bus, {"x": "1", "y": "9", "z": "9"})
    assert rows(got) == [{"x": "5", "y": "3", "z": "9"}]


def test_atom_overwrites_its_output_only(bus):
    got = eval_flif_v(parse_flif("B(x;x)"), XYZ, bus, {"x": "3", "y": "a", "z": "b"})
    assert rows(got) == [{"x": "5", "y": "a", "z": "b"}]
    got = eval_flif_v(parse_flif("(x:=z)"), XYZ, bus, {"x": "9", "y": "1", "z": "4"})
    assert rows(got) == [{"x": "4", "y": "1", "z": "4"}]


@pytest.mark.parametrize("start, want", [("1", [{"x": "5", "y": "3"}]), ("2", [{"x": "5", "y": "3"}]), ("3", [])])
def test_bus_train_inputs_only(bus, start, want):
    assert rows(eval_flif(parse_flif("B(x;y) ; T(y;x)"), bus, {"x": start})) == want


def test_swap():
    D = Instance(Schema({"Swap": (4, 2)}), {"Swap": [("a", "b", "b", "a"), ("b", "a", "a", "b")]})
    got = eval_flif(parse_flif("Swap(x,y;x,y)"), D, {"x": "a", "y": "b"})
    assert rows(got) == [{"x": "b", "y": "a"}]


def test_repeated_outputs_need_equal_values():
    D = Instance(Schema({"R": (3, 1)}), {"R": [("1", "2", "2"), ("1", "3", "4")]})
    assert rows(eval_flif(parse_flif("R(x;y,y)"), D, {"x": "1"})) == [{"x": "1", "y": "2"}]


def test_tests_and_constants(bus):
    V = ("x", "y")
    assert rows(eval_flif_v(parse_flif('(x="1")'), V, bus, {"x": "1", "y": "2"})) == [{"x": "1", "y": "2"}]
    assert rows(eval_flif_v(parse_flif('(x="1")'), V, bus, {"x": "2", "y": "2"})) == []
    assert rows(eval_flif_v(parse_flif("(x=y)"), V, bus, {"x": "2", "y": "2"})) == [{"x": "2", "y": "2"}]
    got = eval_flif_v(parse_flif('(y:="new") ; B(x;x)'), V, bus, {"x": "1", "y": "2"})
    assert rows(got) == [{"x": "2", "y": "new"}, {"x": "3", "y": "new"}]


def test_union_and_difference(bus):
    a = parse_flif("B(x;y) | T(x;y)")
    assert rows(eval_flif_v(a, ("x", "y"), bus, {"x": "1", "y": "0"})) == [
        {"x": "1", "y": "2"}, {"x": "1", "y": "3"}, {"x": "1", "y": "4"}]
    d = parse_flif('B(x;y) - B(x;y) ; (y="3")')
    assert rows(eval_flif_v(d, ("x", "y"), bus, {"x": "1", "y": "0"})) == [{"x": "1", "y": "2"}]
    # the right operand also starts from the input, where T has no y-row
    d = parse_flif("B(x;y) - T(y;z) ; (z=z)")
    got = eval_flif_v(d, XYZ, bus, {"x": "1", "y": "0", "z": "0"})
    assert rows(got) == [{"x": "1", "y": "2", "z": "0"}, {"x": "1", "y": "3", "z": "0"}]


def test_friends_difference():
    F = [("a", "b"), ("a", "c"), ("b", "d"), ("c", "d"), ("b", "a"), ("c", "a"), ("d", "b"), ("d", "c")]
    D = Instance(Schema({"F": (2, 1)}), {"F": F})
    alpha = parse_flif("F(x;y1) ; F(x;y2) ; F(y1;z) ; F(y2;z1) ; (z=z1)")
    q = parse_flif(
        "F(x;y1) ; F(x;y2) ; F(y1;z) ; F(y2;z1) ; (z=z1) - F(x;y1) ; F(x;y2) ; F(y1;z) ; F(y2;z1) ; (z=z1) ; (y1=y2)"
    )
    assert set(variables(alpha)) == set(variables(q))
    got = eval_flif(q, D, {"x": "a"}).project(["y1", "y2", "z"])
    want = {("b", "c", "d"), ("c", "b", "d"), ("b", "c", "a"), ("c", "b", "a")}
    assert {(r["y1"], r["y2"], r["z"]) for r in got} == want


def test_eval_errors(bus):
    e = parse_flif("B(x;y)")
    with pytest.raises(UnboundVariable):
        eval_flif_v(e, ("x", "y"), bus, {"x": "1"})
    with pytest.raises(InputDomainMismatch):
        eval_flif_v(e, ("x",), bus, {"x": "1"})
    with pytest.raises(InputDomainMismatch):
        eval_flif(e, bus, {"x": "1", "y": "2"})
    with pytest.raises(UnknownRelation):
        eval_flif(parse_flif("Q(x;y)"), bus, {"x": "1"})
    with pytest.raises(InputDomainMismatch):
        ValuationSet(["x"], [{"y": "1"}])


def test_eval_exfo_examples():
    D = Instance(Schema({"R": (2, 1)}), {"R": [("1", "2"), ("1", "3")]})
    got = eval_exfo(parse_fo("R(x;y)"), {"x"}, D, {"x": "1"})
    assert rows(got) == [{"x": "1", "y": "2"}, {"x": "1", "y": "3"}]
    with pytest.raises(NotExecutable) as info:
        eval_exfo(parse_fo("!(x=y)"), {"x"}, D, {"x": "1"})
    assert info.value.bound == {"x"}
    got = eval_exfo(parse_fo('exists y. R(x;y) & y = "3"'), {"x"}, D, {"x": "1"})
    assert rows(got) == [{"x": "1"}]


def test_friends_formula_matches_flif():
    rng = random.Random(21)
    phi = parse_fo("F(x;y1) & F(x;y2) & F(y1;z) & F(y2;z) & !(y1=y2)")
    alpha = parse_flif(
        "F(x;y1) ; F(x;y2) ; F(y1;z) ; F(y2;z1) ; (z=z1) - F(x;y1) ; F(x;y2) ; F(y1;z) ; F(y2;z1) ; (z=z1) ; (y1=y2)"
    )
    for _ in range(30):
        pairs = {(rng.choice("1234"), rng.choice("1234")) for _ in range(6)}
        sym = pairs | {(b, a) for a, b in pairs}
        D = Instance(Schema({"F": (2, 1)}), {"F": sym})
        for x in "1234":
            want = eval_exfo(phi, {"x"}, D, {"x": x})
            got = eval_flif(alpha, D, {"x": x}).project(["x", "y1", "y2", "z"])
            assert got == want


def test_padding_does_not_matter():
    cfg = GenConfig()
    rng = random.Random(2)
    for _ in range(300):
        schema = gen_schema(cfg, rng)
        D = gen_instance(cfg, schema, rng)
        e = gen_flif(cfg, schema, rng)
        p = io_profile(e)
        nu = gen_valuation(cfg, p.inputs, rng)
        assert eval_flif(e, D, nu) == eval_flif(e, D, nu, padding="other")
        assert PADDING not in {c for r in eval_flif(e, D, nu) for c in r.values()}


def test_eval_flif_restricts_v_semantics():
    # Eval over inputs equals Eval over V restricted to vars(alpha)
    cfg = GenConfig()
    rng = random.Random(6)
    for _ in range(200):
        schema = gen_schema(cfg, rng)
        D = gen_instance(cfg, schema, rng)
        e = gen_flif(cfg, schema, rng)
        V = set(var_pool(cfg)) | {"extra"}
        nu = gen_valuation(cfg, V, rng)
        p = io_profile(e)
        assert eval_flif(e, D, nu.restrict(p.inputs)) == eval_flif_v(e, V, D, nu).project(p.vars)


def test_inertia_and_finiteness():
    cfg = GenConfig()
    rng = random.Random(9)
    for _ in range(300):
        schema = gen_schema(cfg, rng)
        D = gen_instance(cfg, schema, rng)
        e = gen_flif(cfg, schema, rng)
        V = var_pool(cfg)
        nu = gen_valuation(cfg, V, rng, domain=["1", "2", "zz"])
        outs = io_profile(e).outputs
        allowed = adom(D) | set(nu.values()) | constants(e)
        for r in eval_flif_v(e, V, D, nu):
            assert all(r[v] == nu[v] for v in V if v not in outs)
            assert set(r.values()) <= allowed


def test_identity_property_at_eval_level():
    cfg = GenConfig()
    rng = random.Random(10)
    for _ in range(300):
        schema = gen_schema(cfg, rng)
        D = gen_instance(cfg, schema, rng)
        e = gen_flif_io(cfg, schema, rng)
        assert is_io_disjoint(e)
        p = io_profile(e)
        nu = gen_valuation(cfg, p.inputs, rng)
        for r in eval_flif(e, D, nu):
            assert r in eval_flif(e, D, r.restrict(p.inputs))


def test_in_sem_examples(bus):
    V = XYZ
    same = {"x": "2", "y": "2", "z": "7"}
    assert in_sem(parse_flif("(x=y)"), V, bus, same, same)
    assert not in_sem(parse_flif("(x=z)"), V, bus, same, same)
    b = parse_flif("B(x;y)")
    for x, y in [("1", "2"), ("1", "3"), ("2", "3"), ("3", "5")]:
        for start in ("1", "4", "#0"):
            assert in_sem(b, V, bus, {"x": x, "y": start, "z": "9"}, {"x": x, "y": y, "z": "9"})
    assert not in_sem(b, V, bus, {"x": "1", "y": "2", "z": "9"}, {"x": "1", "y": "2", "z": "8"})


def test_in_sem_agrees_with_eval():
    cfg = GenConfig(max_vars=3, max_adom=3)
    rng = random.Random(13)
    for _ in range(150):
        schema = gen_schema(cfg, rng)
        D = gen_instance(cfg, schema, rng)
        e = gen_flif(cfg, schema, rng, depth=3)
        V = var_pool(cfg)
        cand = candidate_domain(D, constants(e))
        nu1 = gen_valuation(cfg, V, rng, domain=cand)
        got = eval_flif_v(e, V, D, nu1)
        for nu2 in list(got)[:5]:
            assert in_sem(e, V, D, nu1, nu2)
        for _ in range(5):
            nu2 = gen_valuation(cfg, V, rng, domain=cand)
            assert in_sem(e, V, D, nu1, nu2) == (nu2 in got)


def test_eval_exfo_against_brute_force():
    cfg = GenConfig()
    rng = random.Random(14)
    for _ in range(200):
        schema = gen_schema(cfg, rng)
        D = gen_instance(cfg, schema, rng)
        V = set(rng.sample(var_pool(cfg), rng.randint(0, 3)))
        phi = gen_exfo(cfg, schema, rng, V)
        nu = gen_valuation(cfg, V, rng)
        assert set(eval_exfo(phi, V, D, nu).rows) == brute_eval_exfo(phi, V, D, nu)


def test_eval_many_is_union(bus):
    e = parse_flif("B(x;y)")
    got = eval_flif_many(e, bus, [Valuation({"x": "1"}), Valuation({"x": "3"})])
    assert rows(got) == [{"x": "1", "y": "2"}, {"x": "1", "y": "3"}, {"x": "3", "y": "5"}]
