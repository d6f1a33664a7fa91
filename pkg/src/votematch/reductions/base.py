"""Shared result types for instance transformers."""

from __future__ import annotations

from collections.abc import Callable, Collection
from dataclasses import dataclass, field
from typing import Any

from ..election import ControlCertificate, ControlInstance


@dataclass(frozen=True)
class Decided:
    """A transformer settled the question without producing a target."""

    answer: bool
    reason: str
    certificate: Any = None

    def __bool__(self) -> bool:
        return self.answer


@dataclass(frozen=True)
class ReductionOutput:
    """Target instance of a reduction plus a way back.

    ``witness_map`` turns a certificate accepted on ``target`` into one
    accepted on the source.  ``threshold`` is set only when the target
    question is "is the optimum at least this value".
    """

    target: Any
    trace: tuple[str, ...] = ()
    witness_map: Callable[[Any], Any] | None = None
    threshold: int | None = None
    details: dict[str, Any] = field(default_factory=dict)

    def lift(self, cert: Any) -> Any:
        if self.witness_map is None:
            raise NotImplementedError("this reduction has no witness map")
        return self.witness_map(cert)


@dataclass(frozen=True)
class Normalized:
    """A control instance after greedy commitments.

    ``instance`` is the residual problem over the original voters that were
    not settled.  ``committed`` holds the unregistered indices (in the
    original numbering) that every solution adds, and ``origin`` maps each
    residual unregistered index to its original index.
    """

    instance: ControlInstance
    committed: tuple[int, ...] = ()
    origin: tuple[int, ...] = ()
    source: ControlInstance | None = None

    def lift(self, cert: ControlCertificate) -> ControlCertificate:
        added = [self.origin[j] for j in cert.added] + list(self.committed)
        return ControlCertificate(cert.removed, tuple(added))


PreprocessOutcome = Decided | Normalized


def fresh_name(base: str, taken: Collection[str]) -> str:
    """``base`` if unused, otherwise ``base~1``, ``base~2``, ..."""
    if base not in taken:
        return base
    i = 1
    while f"{base}~{i}" in taken:
        i += 1
    return f"{base}~{i}"
