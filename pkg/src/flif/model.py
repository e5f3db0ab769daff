"""Schemas, instances and valuations.

Constants are plain strings and compared by exact text equality. A relation
``R`` of arity ``k`` and input arity ``i`` can only be read through
:func:`access`, which is handed the ``i`` input values and returns the
matching ``k - i`` output values.
"""

from __future__ import annotations

import re
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field

from .errors import (
    ArityMismatch,
    DomainMismatch,
    SchemaError,
    UnboundVariable,
    UnknownRelation,
)

Constant = str
VarName = str
Tuple = tuple  # tuple[Constant, ...]

IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


def is_identifier(name: str) -> bool:
    return bool(IDENT.match(name))


@dataclass(frozen=True)
class Signature:
    arity: int
    input_arity: int

    def __post_init__(self):
        if self.arity < 0 or self.input_arity < 0:
            raise SchemaError("arities must be non-negative")
        if self.input_arity > self.arity:
            raise SchemaError(f"input arity {self.input_arity} exceeds arity {self.arity}")

    @property
    def output_arity(self) -> int:
        return self.arity - self.input_arity


class Schema(Mapping[str, Signature]):
    """Relation names with their arity and input arity."""

    def __init__(self, entries: Mapping[str, Signature | tuple[int, int]] = ()):
        sigs = {}
        for name, sig in dict(entries).items():
            if not is_identifier(name):
                raise SchemaError(f"invalid relation name {name!r}")
            sigs[name] = sig if isinstance(sig, Signature) else Signature(*sig)
        self._entries = sigs

    def __getitem__(self, name: str) -> Signature:
        try:
            return self._entries[name]
        except KeyError:
            raise UnknownRelation(name) from None

    def __iter__(self) -> Iterator[str]:
        return iter(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def __eq__(self, other):
        return isinstance(other, Schema) and self._entries == other._entries

    def __hash__(self):
        return hash(frozenset(self._entries.items()))

    def __repr__(self):
        inner = ", ".join(f"{n}/{s.arity}:{s.input_arity}" for n, s in sorted(self._entries.items()))
        return f"Schema({inner})"

    def iar(self, name: str) -> int:
        return self[name].input_arity

    def oar(self, name: str) -> int:
        return self[name].output_arity


@dataclass(frozen=True)
class Instance:
    """A finite instance of ``schema``; relations not listed are empty."""

    schema: Schema
    relations: Mapping[str, frozenset] = field(default_factory=dict)
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        rels = {}
        for name, tuples in dict(self.relations).items():
            sig = self.schema[name]
            normalized = set()
            for t in tuples:
                t = tuple(t)
                if len(t) != sig.arity:
                    raise ArityMismatch(f"tuple {t!r} has length {len(t)}, {name} has arity {sig.arity}")
                if not all(isinstance(c, str) for c in t):
                    raise SchemaError(f"constants must be strings, got {t!r} in {name}")
                normalized.add(t)
            rels[name] = frozenset(normalized)
        for name in self.schema:
            rels.setdefault(name, frozenset())
        object.__setattr__(self, "relations", rels)
        index = {}
        for name, tuples in rels.items():
            i = self.schema.iar(name)
            by_prefix: dict[tuple, set] = {}
            for t in tuples:
                by_prefix.setdefault(t[:i], set()).add(t[i:])
            index[name] = {k: frozenset(v) for k, v in by_prefix.items()}
        object.__setattr__(self, "_index", index)

    def __hash__(self):
        return hash((self.schema, frozenset(self.relations.items())))

    def __getitem__(self, name: str) -> frozenset:
        self.schema[name]
        return self.relations[name]


def access(D: Instance, R: str, input_tuple: Iterable[Constant]) -> frozenset:
    """Output tuples ``t2`` with ``input_tuple + t2`` in ``D(R)``."""
    t1 = tuple(input_tuple)
    sig = D.schema[R]
    if len(t1) != sig.input_arity:
        raise ArityMismatch(f"{R} expects {sig.input_arity} input values, got {len(t1)}")
    return D._index[R].get(t1, frozenset())


def adom(D: Instance) -> frozenset:
    return frozenset(c for tuples in D.relations.values() for t in tuples for c in t)


class Valuation(Mapping[str, str]):
    """An immutable, hashable map from variables to constants.

    Lookups outside the domain raise :class:`UnboundVariable`.
    """

    __slots__ = ("_map", "_hash")

    def __init__(self, bindings: Mapping[str, str] | Iterable[tuple[str, str]] = ()):
        self._map = dict(bindings)
        self._hash = None

    def __getitem__(self, var: str) -> str:
        try:
            return self._map[var]
        except KeyError:
            raise UnboundVariable(var) from None

    def __contains__(self, var) -> bool:
        return var in self._map

    def __iter__(self) -> Iterator[str]:
        return iter(self._map)

    def __len__(self) -> int:
        return len(self._map)

    def __eq__(self, other):
        if isinstance(other, Valuation):
            return self._map == other._map
        if isinstance(other, Mapping):
            return self._map == dict(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._map.items()))
        return self._hash

    def __repr__(self):
        inner = ", ".join(f"{k}: {v!r}" for k, v in sorted(self._map.items()))
        return "{" + inner + "}"

    @property
    def domain(self) -> frozenset:
        return frozenset(self._map)

    def extend(self, var: str, value: str) -> Valuation:
        return extend(self, var, value)

    def restrict(self, variables: Iterable[str]) -> Valuation:
        return restrict(self, variables)

    def update(self, other: Mapping[str, str]) -> Valuation:
        m = dict(self._map)
        m.update(other)
        return Valuation(m)

    def without(self, variables: Iterable[str]) -> Valuation:
        drop = set(variables)
        return Valuation({k: v for k, v in self._map.items() if k not in drop})

    def sort_key(self) -> tuple:
        return tuple(sorted(self._map.items()))


def extend(nu: Valuation, var: str, value: str) -> Valuation:
    """``nu[var := value]``; also overwrites an existing binding."""
    m = dict(nu._map)
    m[var] = value
    return Valuation(m)


def restrict(nu: Valuation, variables: Iterable[str]) -> Valuation:
    keep = set(variables)
    missing = keep - nu.domain
    if missing:
        raise DomainMismatch(f"cannot restrict to {sorted(missing)}: not in domain {sorted(nu.domain)}")
    return Valuation({k: v for k, v in nu._map.items() if k in keep})


def agree_on(nu1: Valuation, nu2: Valuation, variables: Iterable[str]) -> bool:
    vs = set(variables)
    if not vs <= nu1.domain or not vs <= nu2.domain:
        raise DomainMismatch(f"valuations are not both defined on {sorted(vs)}")
    return all(nu1._map[v] == nu2._map[v] for v in vs)


def agree_outside(nu1: Valuation, nu2: Valuation, variables: Iterable[str]) -> bool:
    if nu1.domain != nu2.domain:
        raise DomainMismatch("valuations have different domains")
    vs = set(variables)
    return all(nu1._map[v] == nu2._map[v] for v in nu1._map if v not in vs)
