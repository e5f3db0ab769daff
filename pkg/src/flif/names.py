"""Deterministic fresh-variable generation."""

from __future__ import annotations

from collections.abc import Iterable


class FreshVarSource:
    """Issues variable names that avoid a forbidden set and each other.

    A name is ``base + "_k"`` with the smallest ``k >= 1`` not yet forbidden
    or issued, so the output depends only on the forbidden set and the order
    of requests.
    """

    def __init__(self, forbidden: Iterable[str] = ()):
        self.forbidden = set(forbidden)
        self.issued: list[str] = []

    def forbid(self, names: Iterable[str]) -> None:
        self.forbidden.update(names)

    def fresh(self, base: str = "v", avoid: Iterable[str] = ()) -> str:
        extra = set(avoid)
        k = 1
        while True:
            name = f"{base}_{k}"
            if name not in self.forbidden and name not in extra:
                break
            k += 1
        self.forbidden.add(name)
        self.issued.append(name)
        return name

    def __repr__(self):
        return f"FreshVarSource(forbidden={len(self.forbidden)}, issued={self.issued})"
