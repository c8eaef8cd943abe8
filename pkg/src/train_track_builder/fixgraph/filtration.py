"""The core filtration of a CT and its case table."""

from dataclasses import dataclass, field

from train_track_builder.core.exceptions import CaseTableError
from train_track_builder.core.logger import get_logger
from train_track_builder.toprep.toprep import TopRep, core_subgraph, refine_filtration, subgraph_vertices


class CoreCase:
    FIXED_LOOP = "1a"  # a fixed loop disjoint from the previous element
    ATTACHED_EDGE = "1b"  # one edge with both ends on the previous element
    EDGE_PAIR = "1c"  # two nonfixed edges sharing a new initial vertex
    EG = "2"


@dataclass
class CoreStep:
    level: int  # 0-based index of the last stratum in the step
    edges: tuple[int, ...]
    case: str
    delta_chi: int

    def to_json(self, f: TopRep) -> dict:
        return {
            "level": self.level,
            "edges": [f.graph.name(e) for e in self.edges],
            "case": self.case,
            "delta_chi": self.delta_chi,
        }


@dataclass
class CoreFiltration:
    levels: list[int] = field(default_factory=list)
    steps: list[CoreStep] = field(default_factory=list)

    def cases(self) -> list[str]:
        return [s.case for s in self.steps]

    def to_json(self, f: TopRep) -> dict:
        return {"levels": self.levels, "steps": [s.to_json(f) for s in self.steps]}


def chi_minus(f: TopRep, edges: frozenset[int]) -> int:
    """Negative Euler characteristic of the subgraph spanned by ``edges``."""
    return len(edges) - len(subgraph_vertices(f.graph, edges))


def _classify(f: TopRep, lower: frozenset[int], new: list[int], egs: int, delta: int) -> str:
    g = f.graph
    old = subgraph_vertices(g, lower)
    if egs:
        if egs > 1:
            raise CaseTableError(f"{egs} EG strata in one core step")
        if delta < 1:
            raise CaseTableError(f"EG core step with Δχ⁻ = {delta}")
        return CoreCase.EG
    if len(new) == 1:
        e = new[0]
        ends = {g.init(e), g.term(e)}
        if len(ends) == 1 and f.is_fixed_edge(e) and not ends & old:
            case, expected = CoreCase.FIXED_LOOP, 0
        elif ends <= old:
            case, expected = CoreCase.ATTACHED_EDGE, 1
        else:
            raise CaseTableError(f"edge {g.name(e)} fits no core step case")
    elif len(new) == 2:
        fresh = subgraph_vertices(g, frozenset(new)) - old
        if len(fresh) != 1 or any(f.is_fixed_edge(e) for e in new):
            raise CaseTableError("edge pair fits no core step case")
        (w,) = fresh
        for e in new:
            if {g.init(e), g.term(e)} - {w} - old or g.init(e) == g.term(e):
                raise CaseTableError(f"edge {g.name(e)} does not join the new vertex to the previous element")
        case, expected = CoreCase.EDGE_PAIR, 1
    else:
        raise CaseTableError(f"{len(new)} edges in a core step without EG strata")
    if delta != expected:
        raise CaseTableError(f"case {case} with Δχ⁻ = {delta}")
    return case


def core_filtration(f: TopRep) -> CoreFiltration:
    """Coarsening of the filtration to the elements that are their own cores, each step tagged by its case."""
    if f.filtration is None:
        f = refine_filtration(f)
    assert f.filtration is not None
    log = get_logger()
    filtration = f.filtration
    out = CoreFiltration()
    lower: frozenset[int] = frozenset()
    prev = -1
    for r in range(len(filtration)):
        element = filtration.element(r)
        if not element or core_subgraph(f.graph, element) != element:
            continue
        new = sorted(element - lower)
        egs = sum(1 for s in filtration.strata[prev + 1 : r + 1] if s.is_eg)
        if egs and not filtration[r].is_eg:
            raise CaseTableError(f"core step ending at {r} has its EG stratum below the top")
        delta = chi_minus(f, element) - chi_minus(f, lower)
        case = _classify(f, lower, new, egs, delta)
        out.levels.append(r)
        out.steps.append(CoreStep(r, tuple(new), case, delta))
        lower, prev = element, r
    if prev != len(filtration) - 1:
        log.warning("the whole graph is not a core filtration element")
    return out


__all__ = ["CoreCase", "CoreFiltration", "CoreStep", "chi_minus", "core_filtration"]
