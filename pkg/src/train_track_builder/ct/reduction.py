"""Reducibility of filtration steps: EG reduction search and the NEG criterion."""

from collections import deque
from dataclasses import dataclass, field
from typing import Iterator

from train_track_builder.core.config import Config, Verdict, get_config
from train_track_builder.core.exceptions import BudgetExceededError, NotEGError, StructuralError
from train_track_builder.core.logger import get_logger
from train_track_builder.ffs.invariant import largest_invariant_below
from train_track_builder.ffs.system import FreeFactorSystem, carries, is_invariant, rose
from train_track_builder.ffs.whitehead import minimal_support
from train_track_builder.graphs.automorphism import Automorphism
from train_track_builder.graphs.ggraph import stallings_graph
from train_track_builder.graphs.graph import MarkedGraph
from train_track_builder.graphs.words import Word, canonical_circuit, inverse, reduce_word
from train_track_builder.nielsen.constants import critical_constant
from train_track_builder.nielsen.inps import find_eg_inps
from train_track_builder.nielsen.principal import nielsen_connections, nielsen_path
from train_track_builder.toprep.toprep import TopRep, core_subgraph, subgraph_vertices


class ReductionKind:
    """Constants for reduction witnesses."""

    EG = "EG-reduction"
    NEG_FIXED_LOOP = "NEG-fixed-loop"
    NEG_NIELSEN_BASIS = "NEG-Nielsen-basis"


class NonAttractedCase:
    """Constants for the shape of the non-attracted system of a top EG stratum."""

    REDUCED = "reduced"
    F_PRIME = "F'-reduction"
    RANK_ONE_FILL = "rank-one-fill"


@dataclass
class ReductionWitness:
    """An invariant free factor system strictly between two filtration classes."""

    kind: str
    system: FreeFactorSystem
    lower: FreeFactorSystem
    upper: FreeFactorSystem
    paths: list[Word] = field(default_factory=list)

    def validate(self, phi: Automorphism) -> bool:
        strictly_above = carries(self.lower, self.system) and not carries(self.system, self.lower)
        strictly_below = carries(self.system, self.upper) and not carries(self.upper, self.system)
        return strictly_above and strictly_below and is_invariant(phi, self.system)

    def to_json(self, f: TopRep | None = None) -> dict:
        fmt = f.format if f is not None else str
        return {
            "kind": self.kind,
            "system": self.system.to_json(),
            "lower": self.lower.to_json(),
            "upper": self.upper.to_json(),
            "paths": [fmt(p) for p in self.paths],
        }


@dataclass
class ReductionResult:
    verdict: str  # Verdict.YES when reduced
    witness: ReductionWitness | None = None
    case: str = ""
    examined: int = 0

    @property
    def reduced(self) -> bool:
        return self.verdict == Verdict.YES


@dataclass
class NonAttractedSystem:
    case: str
    subgroups: list[list[Word]]
    f_prime: FreeFactorSystem
    fills: bool
    path: Word = ()

    def to_json(self, f: TopRep) -> dict:
        names = f.graph.generators
        assert names is not None
        return {
            "case": self.case,
            "subgroups": [[names.format(w) for w in gens] for gens in self.subgroups],
            "F_prime": self.f_prime.to_json(),
            "fills": self.fills,
            "path": f.format(self.path),
        }


# ----------------------------------------------------------------------
# Helpers
# ----------------------------------------------------------------------


def element_system(f: TopRep, edges: frozenset[int]) -> FreeFactorSystem:
    """``[K]`` for the core of the subgraph ``K``."""
    return FreeFactorSystem.of_subgraph(f.graph, core_subgraph(f.graph, edges))


def _marking_word(g: MarkedGraph, v: int, loop: Word) -> Word:
    return g.unmark(g.based_loop(v, loop, g.path_between(g.base, v)))


def _path_within(g: MarkedGraph, edges: frozenset[int], u: int, v: int) -> Word | None:
    parent: dict[int, int] = {u: 0}
    queue = deque([u])
    while queue:
        x = queue.popleft()
        if x == v:
            out = []
            while x != u:
                out.append(parent[x])
                x = g.init(parent[x])
            return tuple(reversed(out))
        for e in g.star(x):
            if abs(e) in edges and g.term(e) not in parent:
                parent[g.term(e)] = e
                queue.append(g.term(e))
    return None


def leaf_segment(f: TopRep, r: int, config: Config) -> Word:
    """Iterated image of the least edge of stratum ``r``, long enough to cross the critical constant."""
    assert f.filtration is not None
    e = min(f.filtration[r].edges)
    target = min(4 * critical_constant(f, r), 4 * config.INP_SEARCH_MAX_LENGTH)
    path: Word = (e,)
    for _ in range(32):
        if len(path) >= target:
            break
        path = f.map_path(path)
    return path


def _segment_word(g: MarkedGraph, segment: Word) -> Word:
    start = g.tree_path(g.init(segment[0]))
    end = g.tree_path(g.term(segment[-1]))
    return g.unmark(reduce_word(start + segment + inverse(end)))


def circuits(g: MarkedGraph, edges: frozenset[int], max_length: int) -> Iterator[Word]:
    """Immersed circuits in the subgraph ``edges`` up to ``max_length``, each class once."""
    seen: set[Word] = set()
    for v in sorted(subgraph_vertices(g, edges)):
        stack: list[Word] = [(e,) for e in g.star(v) if abs(e) in edges]
        while stack:
            path = stack.pop()
            end = g.term(path[-1])
            if end == v and path[0] != -path[-1]:
                key = canonical_circuit(path)
                if key not in seen:
                    seen.add(key)
                    yield path
            if len(path) < max_length:
                stack.extend(path + (x,) for x in g.star(end) if abs(x) in edges and x != -path[-1])


def _is_periodic_circuit(f: TopRep, circuit: Word, bound: int) -> bool:
    key = canonical_circuit(circuit)
    current = circuit
    for _ in range(bound):
        current = f.map_path(current, circuit=True)
        if canonical_circuit(current) == key:
            return True
    return False


def strictly_between(lower: FreeFactorSystem, system: FreeFactorSystem, upper: FreeFactorSystem) -> bool:
    return (
        carries(lower, system)
        and not carries(system, lower)
        and carries(system, upper)
        and not carries(upper, system)
    )


def _intermediate(
    phi: Automorphism,
    kind: str,
    lower: FreeFactorSystem,
    candidate: FreeFactorSystem,
    upper: FreeFactorSystem,
    paths: list[Word],
) -> ReductionWitness | None:
    if not strictly_between(lower, candidate, upper):
        return None
    if not is_invariant(phi, candidate):
        try:
            candidate = largest_invariant_below(phi, candidate)
        except BudgetExceededError:
            return None
        if not strictly_between(lower, candidate, upper):
            return None
    return ReductionWitness(kind, candidate, lower, upper, paths)


# ----------------------------------------------------------------------
# Operations
# ----------------------------------------------------------------------


def non_attracted_system(f: TopRep, r: int, config: Config | None = None) -> NonAttractedSystem:
    """Circuits not weakly attracted to the top EG stratum ``r``.

    They split into paths of ``G_u`` (the core below ``r``) and iNps of height
    ``r``; the iNp decides which of the three shapes the system takes.
    """
    cfg = config or get_config()
    if f.filtration is None or not f.filtration[r].is_eg:
        raise NotEGError(f"stratum {r} is not exponentially growing")
    g = f.graph
    names = g.generators
    assert names is not None
    base = rose(names.names)
    below = core_subgraph(g, f.filtration.below(r))
    lower = FreeFactorSystem.of_subgraph(g, below)
    inps = find_eg_inps(f, r, cfg)
    touched = subgraph_vertices(g, below)
    case, f_prime, path = NonAttractedCase.REDUCED, lower, ()
    subgroups = lower.generators()
    if inps:
        rho = inps[0]
        u0, u1 = g.init(rho[0]), g.term(rho[-1])
        if u0 in touched and u1 in touched:
            case, path = NonAttractedCase.F_PRIME, rho
            loops = g.cycle_basis(set(below), u0)
            back = _path_within(g, below, u1, u0)
            if back is not None:
                loops = loops + [reduce_word(rho + back)]
            else:
                loops = loops + [reduce_word(rho + loop + inverse(rho)) for loop in g.cycle_basis(set(below), u1)]
            words = [_marking_word(g, u0, loop) for loop in loops if loop]
            joined = stallings_graph(words, base)
            untouched = [c for c in lower.components if not c.maps_into(joined)]
            f_prime = minimal_support(names, subgroups=[joined] + untouched)
            subgroups = subgroups + [words]
        elif u0 == u1:
            case, path = NonAttractedCase.RANK_ONE_FILL, rho
            subgroups = subgroups + [[_marking_word(g, u0, rho)]]
    graphs = [stallings_graph(gens, base) for gens in subgroups if any(gens)]
    support = minimal_support(names, subgroups=graphs, segments=[_segment_word(g, leaf_segment(f, r, cfg))], trim=2)
    return NonAttractedSystem(case, subgroups, f_prime, support.is_full(), path)


def eg_reduction_search(f: TopRep, r: int, config: Config | None = None) -> ReductionResult:
    """Decide whether ``[G_s] ⊏ [G_r]`` is reduced for the EG stratum ``r``.

    First the support of the lower system and a long leaf segment is tested,
    then periodic circuits up to the configured length, then the shape of the
    non-attracted system. The candidate budget turns long searches into a
    ``BUDGET`` verdict.
    """
    cfg = config or get_config()
    log = get_logger()
    if f.filtration is None or not f.filtration[r].is_eg:
        raise NotEGError(f"stratum {r} is not exponentially growing")
    g = f.graph
    names = g.generators
    assert names is not None
    phi = f.automorphism()
    below = core_subgraph(g, f.filtration.below(r))
    upper_edges = core_subgraph(g, f.filtration.element(r))
    lower = FreeFactorSystem.of_subgraph(g, below)
    upper = FreeFactorSystem.of_subgraph(g, upper_edges)

    segment = leaf_segment(f, r, cfg)
    support = minimal_support(names, subgroups=list(lower.components), segments=[_segment_word(g, segment)], trim=2)
    witness = _intermediate(phi, ReductionKind.EG, lower, support, upper, [segment])
    if witness is not None:
        log.debug(f"stratum {r}: leaf support {support.format()} is a reduction")
        return ReductionResult(Verdict.NO, witness, "leaf-support", 1)

    examined = 0
    bound = 2 * phi.rank
    for circuit in circuits(g, upper_edges, cfg.REDUCTION_CIRCUIT_LENGTH):
        examined += 1
        if examined > cfg.BUDGET:
            log.warning(f"stratum {r}: reduction search stopped after {cfg.BUDGET} candidates")
            return ReductionResult(Verdict.BUDGET, case="circuits", examined=examined)
        if all(abs(x) in below for x in circuit) or not _is_periodic_circuit(f, circuit, bound):
            continue
        word = _marking_word(g, g.init(circuit[0]), circuit)
        candidate = minimal_support(names, elements=[word], subgroups=list(lower.components))
        witness = _intermediate(phi, ReductionKind.EG, lower, candidate, upper, [circuit])
        if witness is not None:
            log.debug(f"stratum {r}: periodic circuit {f.format(circuit)} gives a reduction")
            return ReductionResult(Verdict.NO, witness, "periodic-circuit", examined)

    system = non_attracted_system(f, r, cfg)
    if system.case == NonAttractedCase.F_PRIME:
        witness = _intermediate(phi, ReductionKind.EG, lower, system.f_prime, upper, [system.path])
        if witness is not None:
            return ReductionResult(Verdict.NO, witness, system.case, examined)
    return ReductionResult(Verdict.YES, case=system.case, examined=examined)


def neg_reduction_check(f: TopRep, s: int, config: Config | None = None) -> ReductionResult:
    """Reduced unless the edge of stratum ``s`` is fixed and its endpoints are Nielsen-connected below it."""
    if f.filtration is None or not f.filtration[s].is_neg:
        raise StructuralError(f"stratum {s} is not NEG")
    g = f.graph
    names = g.generators
    assert names is not None
    stratum = f.filtration[s]
    e = stratum.edges[0]
    if len(stratum.edges) > 1 or not f.is_fixed_edge(e):
        return ReductionResult(Verdict.YES, case="not fixed")
    below = f.filtration.below(s)
    if g.init(e) == g.term(e):
        beta: Word | None = ()
    else:
        beta = nielsen_path(nielsen_connections(f, below, config), g.term(e), g.init(e))
    if beta is None:
        return ReductionResult(Verdict.YES, case="no Nielsen path")
    loop = reduce_word((e,) + beta)
    lower = FreeFactorSystem.of_subgraph(g, below)
    upper = FreeFactorSystem.of_subgraph(g, f.filtration.element(s))
    word = _marking_word(g, g.init(e), loop)
    system = FreeFactorSystem(names, lower.components + (stallings_graph([word], rose(names.names)),)).deduplicated()
    if not strictly_between(lower, system, upper):
        return ReductionResult(Verdict.YES, case="no intermediate system")
    kind = ReductionKind.NEG_FIXED_LOOP if not beta else ReductionKind.NEG_NIELSEN_BASIS
    return ReductionResult(Verdict.NO, ReductionWitness(kind, system, lower, upper, [loop]), kind)
