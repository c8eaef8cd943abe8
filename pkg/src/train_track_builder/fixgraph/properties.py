"""Hyperbolicity and primitive atoroidality decided on a CT of a rotationless power."""

from collections import Counter
from dataclasses import dataclass, field

from train_track_builder.core.config import Config, Verdict, get_config
from train_track_builder.core.logger import get_logger
from train_track_builder.ct.pipeline import build_ct
from train_track_builder.fixgraph.stallings import Variant, fixed_conjugacy_classes, stallings_fixed_graph
from train_track_builder.graphs.automorphism import Automorphism
from train_track_builder.graphs.words import Word, canonical_circuit, cyclic_reduce
from train_track_builder.nielsen.rotationless import rotationless_power
from train_track_builder.toprep.toprep import TopRep


@dataclass
class DecisionResult:
    verdict: str
    exponent: int
    witness: Word | None = None
    detail: dict = field(default_factory=dict)
    ct: TopRep | None = field(default=None, repr=False)

    @property
    def holds(self) -> bool:
        return self.verdict == Verdict.YES

    def to_json(self, phi: Automorphism) -> dict:
        out: dict = {"verdict": self.verdict, "exponent": self.exponent}
        if self.witness is not None:
            out["witness"] = phi.format_word(self.witness)
        out.update(self.detail)
        return out


def _ct_of_power(phi: Automorphism, cfg: Config) -> tuple[int, TopRep]:
    k, _ = rotationless_power(phi, cfg)
    f, _ = build_ct(phi.power(k), config=cfg)
    return k, f


def is_hyperbolic(phi: Automorphism, config: Config | None = None) -> DecisionResult:
    """YES iff no conjugacy class is periodic, that is iff PS(f) has no circuits.

    A NO carries the shortest fixed class of the rotationless power as witness.
    """
    cfg = config or get_config()
    log = get_logger()
    k, f = _ct_of_power(phi, cfg)
    ps = stallings_fixed_graph(f, Variant.PS, cfg)
    if not ps.has_circuits():
        return DecisionResult(Verdict.YES, k, ct=f)
    # the core is nonempty, so some circuit is no longer than its edge count
    classes = fixed_conjugacy_classes(f, max(len(ps.graph.core().edges), 1), cfg)
    witness = min(classes, key=lambda w: (len(w), w)) if classes else None
    log.debug(f"periodic class found for the power {k}")
    return DecisionResult(Verdict.NO, k, witness, ct=f)


def fixed_loop_strata(f: TopRep) -> list[int]:
    """Edges forming a stratum that is a single fixed loop."""
    assert f.filtration is not None
    g = f.graph
    out = []
    for s in f.filtration:
        if len(s.edges) != 1:
            continue
        e = s.edges[0]
        if g.init(e) == g.term(e) and f.is_fixed_edge(e):
            out.append(e)
    return out


def h1_mod2_trivial(word: Word) -> bool:
    """Every generator occurs an even number of times, counted with sign."""
    counts: Counter[int] = Counter()
    for x in word:
        counts[abs(x)] += 1 if x > 0 else -1
    return all(c % 2 == 0 for c in counts.values())


def is_primitively_atoroidal(phi: Automorphism, config: Config | None = None) -> DecisionResult:
    """NO iff some stratum of the CT is a fixed loop, that loop being a periodic basis element.

    On YES every fixed class up to ``DEPTH`` is checked to vanish in
    ``H_1(F_n; Z/2)``; the outcome is reported in ``detail``.
    """
    cfg = config or get_config()
    log = get_logger()
    k, f = _ct_of_power(phi, cfg)
    g = f.graph
    loops = fixed_loop_strata(f)
    if loops:
        e = loops[0]
        witness = cyclic_reduce(g.unmark(g.based_loop(g.init(e), (e,))))
        log.debug(f"fixed loop stratum {g.name(e)}")
        return DecisionResult(Verdict.NO, k, witness, {"stratum": g.name(e)}, f)
    classes = fixed_conjugacy_classes(f, cfg.DEPTH, cfg)
    words = {canonical_circuit(w) for w in classes}
    trivial = all(h1_mod2_trivial(w) for w in words)
    if not trivial:
        log.warning("a fixed class is nonzero in H_1 mod 2 although no stratum is a fixed loop")
    return DecisionResult(Verdict.YES, k, detail={"h1_trivial": trivial, "classes_checked": len(words)}, ct=f)


__all__ = [
    "DecisionResult",
    "fixed_loop_strata",
    "h1_mod2_trivial",
    "is_hyperbolic",
    "is_primitively_atoroidal",
]
