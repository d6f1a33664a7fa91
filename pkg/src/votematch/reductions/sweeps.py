"""Budget variants as disjunctions over exact variants."""

from __future__ import annotations

from ..election import Action, ControlCertificate, ControlInstance
from ..errors import ContractError
from .base import ReductionOutput


def _sweep(src: ControlInstance, action: Action) -> ReductionOutput:
    if src.action is not action:
        raise ContractError(f"expected control by {action.value}")
    if src.exact:
        raise ContractError("expected the budget variant")
    targets = tuple(src.with_changes(budget=ell, exact=True) for ell in range(src.budget + 1))

    def lift(cert: ControlCertificate) -> ControlCertificate:
        return cert

    trace = (f"{len(targets)} exact instances, sizes 0..{src.budget}",)
    return ReductionOutput(targets, trace, lift)


def ccrv_to_ccrv_exact_sweep(src: ControlInstance) -> ReductionOutput:
    """Replacing at most k voters works iff replacing exactly l works for some l <= k."""
    return _sweep(src, Action.REPLACE)


def ccav_to_ccav_exact_sweep(src: ControlInstance) -> ReductionOutput:
    """Adding at most k voters works iff adding exactly l works for some l <= k."""
    return _sweep(src, Action.ADD)
