import random

import pytest

from flif.analysis import io_profile
from flif.errors import NotIoDisjoint, PlanTypeError, UnknownRelation
from flif.evaluate import ValuationSet, eval_flif
from flif.model import Instance, Schema
from flif.oracle import GenConfig, gen_flif_io, gen_instance, gen_schema, gen_valuation
from flif.plan import (
    AccessJoin,
    Difference,
    GenProjectConst,
    GenProjectVar,
    In,
    Let,
    NaturalJoin,
    Project,
    PUnion,
    Ref,
    SelectConst,
    SelectEq,
    compile_plan,
    eval_plan,
    node_count,
    nodes,
    parse_plan,
    plan_schema,
    print_plan,
)
from flif.syntax.flif import parse_flif, size

RS = Schema({"R": (3, 1), "S": (4, 2)})


def strengthened(alpha, D, N):
    """Rows of N extended by what alpha computes from their input part."""
    p = io_profile(alpha)
    out = set()
    for row in N:
        for r in eval_flif(alpha, D, row.restrict(p.inputs)):
            out.add(row.update(r))
    return ValuationSet(N.schema | p.outputs, out)


def test_chain_plan():
    plan = compile_plan(parse_flif("R(x;y) ; S(y;z)"))
    assert plan == AccessJoin(AccessJoin(In(), "R", ["x"], ["y"]), "S", ["y"], ["z"])
    assert print_plan(plan) == "access(access(In, R(x;y)), S(y;z))"


def test_overwrite_plan_projects_first():
    plan = compile_plan(parse_flif("R(x1;y,u) ; S(x2,y;z,u)"))
    want = AccessJoin(Project(AccessJoin(In(), "R", ["x1"], ["y", "u"]), ["x1", "x2", "y"]),
                      "S", ["x2", "y"], ["z", "u"])
    assert plan == want
    assert node_count(plan) == 4


def test_chain_plan_on_bus(bus):
    plan = compile_plan(parse_flif("B(x;y) ; T(y;z)"))
    got = eval_plan(plan, bus, [{"x": "1"}])
    assert sorted((r["x"], r["y"], r["z"]) for r in got) == [("1", "3", "5")]


def test_in_alone(bus):
    N = ValuationSet(["x"], [{"x": "1"}, {"x": "7"}])
    assert eval_plan(In(), bus, N) == N


def test_union_plan_keeps_per_row_inputs():
    # (project[x,y2](In) access R(x;y1)) join In  union  (project[x,y1](In) access S(x;y2)) join In
    D = Instance(Schema({"R": (2, 1), "S": (2, 1)}),
                 {"R": [("1", "a"), ("2", "b")], "S": [("1", "c"), ("2", "d")]})
    left = NaturalJoin(AccessJoin(Project(In(), ["x", "y2"]), "R", ["x"], ["y1"]), In())
    right = NaturalJoin(AccessJoin(Project(In(), ["x", "y1"]), "S", ["x"], ["y2"]), In())
    plan = PUnion(left, right)
    N = ValuationSet(["x", "y1", "y2"], [{"x": "1", "y1": "a", "y2": "z"}, {"x": "2", "y1": "q", "y2": "d"}])
    assert eval_plan(plan, D, N) == N
    # without the joins the second row would produce a y1 value it never had
    loose = PUnion(AccessJoin(Project(In(), ["x", "y2"]), "R", ["x"], ["y1"]),
                   AccessJoin(Project(In(), ["x", "y1"]), "S", ["x"], ["y2"]))
    assert len(eval_plan(loose, D, N)) == 4
    # the expression has different branch outputs, so this is the static reading:
    # the rows that the expression can reach from themselves
    alpha = parse_flif("R(x;y1) | S(x;y2)")
    assert {r for r in N if r in eval_flif(alpha, D, r)} == set(N)
    N2 = ValuationSet(N.schema, [{"x": "1", "y1": "b", "y2": "z"}, {"x": "2", "y1": "b", "y2": "b"}])
    assert set(eval_plan(plan, D, N2)) == {r for r in N2 if r in eval_flif(alpha, D, r)} == {N2.sorted()[1]}


def test_friends_difference_form():
    F = [("a", "b"), ("a", "c"), ("b", "d"), ("c", "d"), ("b", "a"), ("c", "a"), ("d", "b"), ("d", "c")]
    D = Instance(Schema({"F": (2, 1)}), {"F": F})
    # y1 != y2 written as the io-disjoint test (y1=y1) - (y1=y2)
    alpha = parse_flif("F(x;y1) ; F(x;y2) ; (F(y1;z) & F(y2;z)) ; ((y1=y1) - (y1=y2))")
    plan = compile_plan(alpha)
    assert print_plan(plan) == (
        "let P_2 = let P_1 = access(access(In, F(x;y1)), F(x;y2)) in "
        "minus(access(P_1, F(y1;z)), minus(access(P_1, F(y1;z)), access(P_1, F(y2;z)))) in "
        "minus(select[y1=y1](P_2), select[y1=y2](P_2))"
    )
    assert node_count(plan) == 18
    N = ValuationSet(["x"], [{"x": "a"}, {"x": "d"}])
    got = eval_plan(plan, D, N)
    assert got == strengthened(alpha, D, N)
    # z may coincide with x: a and d are common friends of b and c
    assert {(r["x"], r["y1"], r["y2"], r["z"]) for r in got} == {
        (x, y1, y2, z) for x in "ad" for y1, y2 in [("b", "c"), ("c", "b")] for z in "ad"}


def test_plan_schema_rules():
    assert plan_schema(In(), {"x"}).output_schema == {"x"}
    acc = AccessJoin(In(), "R", ["x"], ["y"])
    assert plan_schema(acc, {"x"}).output_schema == {"x", "y"}
    with pytest.raises(PlanTypeError) as info:
        plan_schema(acc, {"x", "y"})
    assert info.value.node == acc
    with pytest.raises(PlanTypeError):
        plan_schema(acc, {"z"})
    with pytest.raises(PlanTypeError):
        plan_schema(PUnion(In(), acc), {"x"})
    with pytest.raises(PlanTypeError):
        plan_schema(Difference(acc, In()), {"x"})
    assert plan_schema(NaturalJoin(acc, In()), {"x"}).output_schema == {"x", "y"}
    with pytest.raises(PlanTypeError):
        plan_schema(Project(In(), ["q"]), {"x"})
    with pytest.raises(PlanTypeError):
        plan_schema(GenProjectVar(In(), ["x"], "x", "x"), {"x"})
    with pytest.raises(PlanTypeError):
        plan_schema(Ref("P"), {"x"})
    with pytest.raises(PlanTypeError):
        plan_schema(SelectEq(In(), "x", "w"), {"x"})


def test_plan_schema_checks_arity_with_database_schema():
    acc = AccessJoin(In(), "R", ["x"], ["y"])
    with pytest.raises(PlanTypeError):
        plan_schema(acc, {"x"}, RS)
    with pytest.raises(UnknownRelation):
        plan_schema(AccessJoin(In(), "Q", [], []), {"x"}, RS)


def test_node_schemas_cover_every_node():
    plan = compile_plan(parse_flif("R(x;y) ; (z:=y) - R(x;y) ; (z:=y) ; (z=x)"))
    report = plan_schema(plan, {"x"})
    assert len(report.node_schemas) == node_count(plan)
    assert report.output_schema == {"x", "y", "z"}


def test_only_access_joins_name_relations():
    plan = compile_plan(parse_flif("R(x;y,u) ; S(x,y;z,w) | R(x;y,u) ; S(x,y;z,w) ; (w=u)"))
    for n in nodes(plan):
        assert hasattr(n, "rel") == isinstance(n, AccessJoin)


def test_compile_errors():
    with pytest.raises(NotIoDisjoint):
        compile_plan(parse_flif("F(x;x)"))
    alpha = parse_flif("R(x;y)")
    with pytest.raises(PlanTypeError):
        compile_plan(alpha, {"y", "x"})
    with pytest.raises(PlanTypeError):
        compile_plan(alpha, {"q"})


def test_empty_input_needs_schema(bus):
    plan = compile_plan(parse_flif("B(x;y)"))
    assert len(eval_plan(plan, bus, ValuationSet(["x"]))) == 0
    with pytest.raises(PlanTypeError):
        eval_plan(plan, bus, [])


def test_assignments_and_selections(bus):
    plan = compile_plan(parse_flif('B(x;y) ; (z:=y) ; (w:="k") ; (w="k") ; (z=y)'), ["x", "q"])
    got = eval_plan(plan, bus, [{"x": "1", "q": "0"}])
    assert sorted((r["y"], r["z"], r["w"], r["q"]) for r in got) == [("2", "2", "k", "0"), ("3", "3", "k", "0")]


def test_text_round_trip():
    plans = [
        In(),
        AccessJoin(In(), "R", [], []),
        Let("P_1", SelectConst(In(), "x", 'a "q"'), PUnion(Ref("P_1"), SelectEq(Ref("P_1"), "x", "y"))),
        Difference(GenProjectConst(In(), ["x"], "y", "c"), NaturalJoin(GenProjectVar(In(), ["x"], "y", "x"), In())),
        Project(In(), []),
    ]
    for p in plans:
        assert parse_plan(print_plan(p)) == p


def test_compiled_round_trip_random():
    cfg = GenConfig()
    rng = random.Random(50)
    for _ in range(300):
        alpha = gen_flif_io(cfg, gen_schema(cfg, rng), rng)
        plan = compile_plan(alpha)
        assert parse_plan(print_plan(plan)) == plan


def test_compiler_strengthened_claim_random():
    cfg = GenConfig()
    rng = random.Random(51)
    worst = 0.0
    for _ in range(300):
        schema = gen_schema(cfg, rng)
        D = gen_instance(cfg, schema, rng)
        alpha = gen_flif_io(cfg, schema, rng)
        p = io_profile(alpha)
        Z = p.inputs | {"q"}
        plan = compile_plan(alpha, Z)
        worst = max(worst, node_count(plan) / size(alpha))
        N = ValuationSet(Z, [gen_valuation(cfg, Z, rng) for _ in range(rng.randint(1, 5))])
        got = eval_plan(plan, D, N)
        assert got == strengthened(alpha, D, N)
        assert got.schema == plan_schema(plan, Z).output_schema
    assert worst <= 8
