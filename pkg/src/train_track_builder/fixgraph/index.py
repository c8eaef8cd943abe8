"""Index invariants read off CS(f)."""

from dataclasses import dataclass, field
from fractions import Fraction

from train_track_builder.core.config import Config, get_config
from train_track_builder.core.logger import get_logger
from train_track_builder.ct.pipeline import build_ct
from train_track_builder.fixgraph.stallings import (
    FixedPointGraph,
    RayKind,
    Variant,
    eigenray_candidates,
    extend_to_rays,
    stallings_fixed_graph,
)
from train_track_builder.graphs.automorphism import Automorphism
from train_track_builder.nielsen.rotationless import rotationless_power
from train_track_builder.toprep.toprep import TopRep


@dataclass
class ClassIndex:
    """Contribution of one principal isogredience class, i.e. one component of CS(f)."""

    rank: int
    attractors: int
    neg_rays: int

    @property
    def r_hat(self) -> Fraction:
        return self.rank + Fraction(self.attractors, 2)

    @property
    def i(self) -> Fraction:
        return max(Fraction(0), self.r_hat - 1)

    @property
    def j(self) -> Fraction:
        return self.i + Fraction(self.neg_rays, 2)

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "attractors": self.attractors,
            "neg_rays": self.neg_rays,
            "r_hat": str(self.r_hat),
            "i": str(self.i),
            "j": str(self.j),
        }


@dataclass
class IndexReport:
    rank_n: int
    exponent: int
    classes: list[ClassIndex] = field(default_factory=list)

    @property
    def i(self) -> Fraction:
        return sum((c.i for c in self.classes), Fraction(0))

    @property
    def j(self) -> Fraction:
        return sum((c.j for c in self.classes), Fraction(0))

    @property
    def components(self) -> int:
        return len(self.classes)

    @property
    def attractors(self) -> int:
        return sum(c.attractors for c in self.classes)

    @property
    def exact(self) -> bool:
        """Values are exact for φ itself; otherwise they are those of ``φ^exponent``, which bound φ's from above."""
        return self.exponent == 1

    def bound_violations(self) -> list[str]:
        n = self.rank_n
        out = []
        if self.j > n - 1:
            out.append(f"j = {self.j} exceeds n - 1 = {n - 1}")
        if self.components > 2 * self.j:
            out.append(f"{self.components} components exceed 2j = {2 * self.j}")
        if self.attractors > 6 * (n - 1):
            out.append(f"{self.attractors} attractor orbits exceed 6(n - 1) = {6 * (n - 1)}")
        return out

    def to_json(self) -> dict:
        return {
            "n": self.rank_n,
            "exponent": self.exponent,
            "exact": self.exact,
            "i": str(self.i),
            "j": str(self.j),
            "classes": [c.to_json() for c in self.classes],
            "violations": self.bound_violations(),
        }


def neg_rays(f: TopRep, config: Config | None = None) -> list[tuple[int, str]]:
    """Edges generating the rays of CS(f), tagged ``EG`` or ``NEG`` by their stratum."""
    return eigenray_candidates(f, config)


def index_of_graph(cs: FixedPointGraph) -> list[ClassIndex]:
    """One entry per component of CS(f) that contains a principal vertex."""
    out = []
    for comp in cs.components():
        if not any(v in cs.principal for v in comp):
            continue
        out.append(ClassIndex(cs.component_rank(comp), cs.ends(comp), cs.neg_ends(comp)))
    return out


def index(phi: Automorphism, config: Config | None = None) -> IndexReport:
    """``i(φ)`` and ``j(φ)``, computed for the rotationless power when φ is not rotationless."""
    cfg = config or get_config()
    log = get_logger()
    k, _ = rotationless_power(phi, cfg)
    if k > 1:
        log.info(f"not rotationless; reporting the index of the power {k}")
    f, _ = build_ct(phi.power(k), config=cfg)
    cs = extend_to_rays(stallings_fixed_graph(f, Variant.PS, cfg), cfg)
    report = IndexReport(phi.rank, k, index_of_graph(cs))
    for problem in report.bound_violations():
        log.warning(f"index bound violated: {problem}")
    return report


__all__ = ["ClassIndex", "IndexReport", "RayKind", "index", "index_of_graph", "neg_rays"]
