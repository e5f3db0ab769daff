import pytest

from flif.errors import (
    ArityMismatch,
    DomainMismatch,
    FlifError,
    InputError,
    SchemaError,
    SemanticError,
    UnboundVariable,
    UnknownRelation,
)
from flif.model import (
    Instance,
    Schema,
    Signature,
    Valuation,
    access,
    adom,
    agree_on,
    agree_outside,
)


def test_access_returns_output_parts(bus):
    assert access(bus, "B", ("1",)) == {("2",), ("3",)}
    assert access(bus, "T", ("3",)) == {("5",)}
    assert access(bus, "T", ("2",)) == frozenset()


def test_access_checks_input_width(bus):
    with pytest.raises(ArityMismatch):
        access(bus, "B", ("1", "2"))
    with pytest.raises(UnknownRelation):
        access(bus, "Q", ())


def test_nullary_and_full_input_relations():
    D = Instance(Schema({"S": (0, 0), "K": (2, 2), "E": (1, 0)}), {"S": [()], "K": [("a", "b")]})
    assert access(D, "S", ()) == {()}
    assert access(D, "K", ("a", "b")) == {()}
    assert access(D, "K", ("b", "a")) == frozenset()
    assert access(D, "E", ()) == frozenset()


def test_adom(bus):
    assert adom(bus) == {"1", "2", "3", "4", "5"}
    assert adom(Instance(Schema({"R": (1, 0)}))) == frozenset()


def test_signature_bounds():
    assert Signature(3, 1).output_arity == 2
    with pytest.raises(SchemaError):
        Signature(1, 2)
    with pytest.raises(SchemaError):
        Signature(-1, 0)


def test_instance_rejects_bad_tuples():
    with pytest.raises(ArityMismatch):
        Instance(Schema({"R": (2, 1)}), {"R": [("1",)]})
    with pytest.raises(UnknownRelation):
        Instance(Schema({"R": (2, 1)}), {"Q": []})
    with pytest.raises(SchemaError):
        Instance(Schema({"R": (1, 0)}), {"R": [(1,)]})
    with pytest.raises(SchemaError):
        Schema({"no good": (1, 0)})


def test_valuation_operations():
    nu = Valuation({"x": "1", "y": "2"})
    assert nu.extend("z", "3") == {"x": "1", "y": "2", "z": "3"}
    assert nu.extend("x", "9")["x"] == "9"
    assert nu.restrict(["x"]) == {"x": "1"}
    assert nu.without(["x"]) == {"y": "2"}
    assert nu.update({"y": "5"}) == {"x": "1", "y": "5"}
    assert nu == {"x": "1", "y": "2"}
    assert hash(nu) == hash(Valuation([("y", "2"), ("x", "1")]))
    assert nu.domain == {"x", "y"}


def test_valuation_errors():
    nu = Valuation({"x": "1"})
    with pytest.raises(UnboundVariable):
        nu["y"]
    with pytest.raises(DomainMismatch):
        nu.restrict(["x", "y"])
    with pytest.raises(DomainMismatch):
        agree_outside(nu, Valuation({"y": "1"}), ())


def test_agreement_helpers():
    a = Valuation({"x": "1", "y": "2", "z": "3"})
    b = Valuation({"x": "1", "y": "7", "z": "3"})
    assert agree_on(a, b, ["x", "z"])
    assert not agree_on(a, b, ["y"])
    assert agree_outside(a, b, ["y"])
    assert not agree_outside(a, b, ["z"])


def test_error_hierarchy():
    assert issubclass(SemanticError, FlifError)
    assert issubclass(InputError, FlifError)
    assert not issubclass(InputError, SemanticError)
    # lookups stay compatible with Mapping.get
    assert issubclass(UnboundVariable, KeyError)
    assert Valuation({"x": "1"}).get("y") is None
