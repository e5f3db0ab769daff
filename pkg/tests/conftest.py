import pytest

from flif.model import Instance, Schema


def bus_schema():
    return Schema({"B": (2, 1), "T": (2, 1)})


def bus_instance():
    return Instance(
        bus_schema(),
        {"B": [("1", "2"), ("1", "3"), ("2", "3"), ("3", "5")], "T": [("1", "4"), ("3", "5")]},
    )


@pytest.fixture
def bus():
    return bus_instance()


@pytest.fixture
def schema_rst():
    # R/S/T with mixed access patterns, used by the io and plan examples
    return Schema({"R": (2, 1), "S": (2, 1), "T": (2, 1)})
