"""Exception hierarchy shared by every part of the package.

Errors split into two families so the command line front end can map them
onto exit codes: :class:`SemanticError` (exit 1) and :class:`InputError`
(exit 2).
"""

from __future__ import annotations


class FlifError(Exception):
    """Base class for all errors raised by this package."""


class SemanticError(FlifError):
    pass


class InputError(FlifError):
    pass


class SchemaError(SemanticError):
    pass


class UnknownRelation(SchemaError):
    def __init__(self, name: str):
        super().__init__(f"unknown relation {name!r}")
        self.name = name


class ArityMismatch(SchemaError):
    pass


class DomainMismatch(SemanticError):
    pass


class UnboundVariable(SemanticError, KeyError):
    """Lookup of a variable outside a valuation's domain."""

    def __init__(self, var: str):
        SemanticError.__init__(self, f"variable {var!r} is not bound")
        self.var = var

    def __str__(self) -> str:
        return self.args[0]


class InputDomainMismatch(SemanticError):
    pass


class NotExecutable(SemanticError):
    def __init__(self, message: str, witness=None, bound=None):
        super().__init__(message)
        self.witness = witness
        self.bound = bound


class NotIoDisjoint(SemanticError):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class BadRenaming(SemanticError):
    pass


class PlanTypeError(SemanticError):
    def __init__(self, node, reason: str):
        super().__init__(reason)
        self.node = node
        self.reason = reason


class BudgetExceeded(SemanticError):
    pass


class FlifSyntaxError(InputError):
    def __init__(self, message: str, text: str = "", pos: int = 0):
        super().__init__(f"{message} at position {pos}")
        self.text = text
        self.pos = pos


class ConstantPlacementError(FlifSyntaxError):
    pass
