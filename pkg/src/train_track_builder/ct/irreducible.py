"""Full irreducibility relative to a pair of invariant free factor systems."""

from dataclasses import dataclass

from train_track_builder.core.config import Config, Verdict, get_config
from train_track_builder.core.exceptions import ImproperSystemError, NotInvariantError
from train_track_builder.core.logger import get_logger
from train_track_builder.ct.pipeline import build_ct
from train_track_builder.ct.reduction import element_system, strictly_between
from train_track_builder.ffs.system import FreeFactorSystem, carries, is_invariant
from train_track_builder.graphs.automorphism import Automorphism
from train_track_builder.nielsen.rotationless import rotationless_power
from train_track_builder.toprep.toprep import TopRep


@dataclass
class IrreducibilityResult:
    verdict: str
    exponent: int
    witness: FreeFactorSystem | None = None
    level: int | None = None
    ct: TopRep | None = None

    @property
    def irreducible(self) -> bool:
        return self.verdict == Verdict.YES

    def to_json(self) -> dict:
        out: dict = {"verdict": self.verdict, "exponent": self.exponent}
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
            out["filtration_element"] = self.level
        return out


def fully_irreducible_rel(
    psi: Automorphism,
    lower: FreeFactorSystem,
    upper: FreeFactorSystem,
    config: Config | None = None,
) -> IrreducibilityResult:
    """YES when no invariant free factor system sits strictly between ``lower`` and ``upper``.

    A CT for a rotationless power realizing both systems is built; any core
    filtration element strictly between them is the witness.
    """
    cfg = config or get_config()
    log = get_logger()
    if not carries(lower, upper) or carries(upper, lower):
        raise ImproperSystemError("the lower system must be strictly carried by the upper one")
    for system in (lower, upper):
        if not is_invariant(psi, system):
            raise NotInvariantError(f"{system.format()} is not invariant")
    k, _ = rotationless_power(psi, cfg)
    phi = psi.power(k)
    f, _ = build_ct(phi, [lower, upper], cfg)
    assert f.filtration is not None
    for r in range(len(f.filtration)):
        system = element_system(f, f.filtration.element(r))
        if system.is_empty():
            continue
        if strictly_between(lower, system, upper):
            log.info(f"reducible: {system.format()} at filtration element {r} of the power {k}")
            return IrreducibilityResult(Verdict.NO, k, system, r, f)
    return IrreducibilityResult(Verdict.YES, k, ct=f)


__all__ = ["IrreducibilityResult", "fully_irreducible_rel"]
