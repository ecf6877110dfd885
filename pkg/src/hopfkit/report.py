"""Validation reports and the exception hierarchy shared by all modules.

Validators never raise on a failed axiom; they collect :class:`Failure`
records in a :class:`ValidationReport` so that every violation can be shown
at once.  Exceptions are reserved for inputs that cannot be processed at all.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


class HopfkitError(Exception):
    """Base class of all errors raised by this package."""


class NotAGroup(HopfkitError):
    """A multiplication table violates the group axioms."""


class InvalidAction(HopfkitError):
    """A permutation table is not a group action (by automorphisms)."""


class NotAHomomorphism(HopfkitError):
    """A map between groups does not respect multiplication."""


class NotModuleAlgebra(HopfkitError):
    """An action tensor does not make the target a module (co)algebra."""


class YetterDrinfeldFails(HopfkitError):
    """The Yetter-Drinfeld compatibility between action and coproduct fails."""


class NotSemisimple(HopfkitError):
    """No idempotent two-sided integral exists."""


class HaarUnavailable(HopfkitError):
    """A projector was requested but the Haar integral could not be formed."""


class NotEquivariant(HopfkitError):
    """The map f: Y -> X does not commute with the G-actions."""


class ImageActsNontrivially(HopfkitError):
    """The image of the boundary map acts nontrivially on X or Y."""


class InvalidDescription(HopfkitError):
    """A cell-complex description violates the surface invariants."""


class TooLarge(HopfkitError):
    """A computation exceeds its configured size bound."""


class NonIntegerTrace(HopfkitError):
    """The trace of the projector product is not an integer."""


@dataclass(frozen=True)
class Failure:
    """One violated axiom together with the basis indices that witness it."""

    axiom: str
    witness: tuple
    detail: str = ""

    def to_dict(self) -> dict[str, Any]:
        return {"axiom": self.axiom, "witness": _jsonable(self.witness), "detail": self.detail}


@dataclass
class ValidationReport:
    """Outcome of an axiom check: the clauses examined and the failures found."""

    subject: str
    checked: list[str] = field(default_factory=list)
    failures: list[Failure] = field(default_factory=list)
    flags: dict[str, bool] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures

    def __bool__(self) -> bool:
        return self.ok

    def check(self, axiom: str) -> None:
        if axiom not in self.checked:
            self.checked.append(axiom)

    def fail(self, axiom: str, witness: tuple, detail: str = "") -> None:
        self.check(axiom)
        self.failures.append(Failure(axiom, tuple(witness), detail))

    def failed_axioms(self) -> set[str]:
        return {f.axiom for f in self.failures}

    def passed(self, axiom: str) -> bool:
        return axiom in self.checked and axiom not in self.failed_axioms()

    def merge(self, other: "ValidationReport", prefix: str = "") -> None:
        for name in other.checked:
            self.check(prefix + name)
        for f in other.failures:
            self.failures.append(Failure(prefix + f.axiom, f.witness, f.detail))
        for k, v in other.flags.items():
            self.flags[prefix + k] = v

    def to_dict(self) -> dict[str, Any]:
        return {
            "subject": self.subject,
            "ok": self.ok,
            "checked": list(self.checked),
            "failures": [f.to_dict() for f in self.failures],
            "flags": dict(self.flags),
        }

    def __str__(self) -> str:
        status = "ok" if self.ok else f"{len(self.failures)} failure(s)"
        lines = [f"{self.subject}: {status} ({len(self.checked)} clauses)"]
        for f in self.failures[:20]:
            lines.append(f"  {f.axiom} at {f.witness} {f.detail}".rstrip())
        return "\n".join(lines)


def _jsonable(obj: Any) -> Any:
    if isinstance(obj, (tuple, list)):
        return [_jsonable(x) for x in obj]
    if isinstance(obj, (int, str, float, bool)) or obj is None:
        return obj
    return str(obj)
