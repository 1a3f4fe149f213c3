"""Exception hierarchy; the CLI maps these to exit codes."""
from __future__ import annotations

from ._pykernels import NotDivisible


class QccError(Exception):
    """Base class for errors raised by this package."""


class InputError(QccError, ValueError):
    """Malformed user input (quiver file, dimension vector, options)."""


class NotDynkin(InputError):
    pass


class NotTypeA(InputError):
    pass


class CycleDetected(InputError):
    pass


class NotARoot(InputError):
    pass


class SumMismatch(InputError):
    pass


class CoordinateTooLarge(InputError):
    pass


class NotASubmodule(InputError):
    pass


class NonGenericZ(InputError):
    pass


class ModeMismatch(InputError):
    pass


class BlockMismatch(InputError):
    pass


class NonzeroConstantTerm(InputError):
    pass


class InternalError(QccError, AssertionError):
    """An invariant that should always hold was violated."""


class NoAdmissibleOrder(InternalError):
    pass


class NotFound(InternalError):
    pass


class NotUnique(InternalError):
    pass


class NegativeExt(InternalError):
    pass


class SamplingExhausted(InternalError):
    pass


class MissingBasicClass(QccError, KeyError):
    def __str__(self) -> str:
        return Exception.__str__(self)


__all__ = [
    "BlockMismatch",
    "CoordinateTooLarge",
    "CycleDetected",
    "InputError",
    "InternalError",
    "MissingBasicClass",
    "ModeMismatch",
    "NegativeExt",
    "NoAdmissibleOrder",
    "NonGenericZ",
    "NonzeroConstantTerm",
    "NotARoot",
    "NotASubmodule",
    "NotDivisible",
    "NotDynkin",
    "NotFound",
    "NotTypeA",
    "NotUnique",
    "QccError",
    "SamplingExhausted",
    "SumMismatch",
]
