"""Largest invariant free factor system below a given one."""

from train_track_builder.core.exceptions import BudgetExceededError, ImproperSystemError
from train_track_builder.core.logger import get_logger
from train_track_builder.ffs.system import FreeFactorSystem, apply_automorphism, carries, meet
from train_track_builder.graphs.automorphism import Automorphism


def largest_invariant_below(phi: Automorphism, system: FreeFactorSystem) -> FreeFactorSystem:
    """Limit of ``F, F ∧ φ(F), ...``; every φ-invariant system carried by ``F`` is carried by it."""
    current = system
    limit = 4 * phi.rank + 4
    for _ in range(limit):
        nxt = meet(current, apply_automorphism(phi, current))
        if nxt.same_as(current):
            return current
        current = nxt
    raise BudgetExceededError("meet chain did not stabilize", partial=current)


def invariant_ffs_between(
    phi: Automorphism, lower: FreeFactorSystem, upper: FreeFactorSystem
) -> FreeFactorSystem | None:
    """φ-invariant F with ``lower ⊏ F ⊑ upper``, or None.

    ``lower`` is assumed φ-invariant; ``upper`` must be proper.
    """
    if not upper.is_proper():
        raise ImproperSystemError("upper free factor system is not proper")
    log = get_logger()
    candidate = largest_invariant_below(phi, upper)
    log.debug(f"largest invariant system below {upper.format()}: {candidate.format()}")
    if carries(lower, candidate) and not carries(candidate, lower):
        return candidate
    return None
