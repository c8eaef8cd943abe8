"""Verification of the defining properties of a CT."""

from dataclasses import dataclass, field

from train_track_builder.core.config import Config, Verdict, get_config
from train_track_builder.core.logger import get_logger
from train_track_builder.ct.reduction import eg_reduction_search, neg_reduction_check
from train_track_builder.graphs.words import root
from train_track_builder.nielsen.inps import find_eg_inps
from train_track_builder.nielsen.principal import principal_set
from train_track_builder.nielsen.rotationless import is_rotationless
from train_track_builder.nielsen.splitting import SplittingContext, complete_split
from train_track_builder.toprep.normalize import check_core_closure, check_periodic_edges
from train_track_builder.toprep.rtt import check_rtt
from train_track_builder.toprep.toprep import StratumKind, TopRep, refine_filtration, subgraph_vertices


class CTProperty:
    """Names of the nine CT properties, in checking order."""

    ROTATIONLESS = "Rotationless"
    COMPLETELY_SPLIT = "Completely Split"
    FILTRATION = "Filtration"
    VERTICES = "Vertices"
    PERIODIC_EDGES = "Periodic Edges"
    ZERO_STRATA = "Zero Strata"
    LINEAR_EDGES = "Linear Edges"
    NEG_NIELSEN_PATHS = "NEG Nielsen Paths"
    EG_NIELSEN_PATHS = "EG Nielsen Paths"

    ALL = (
        ROTATIONLESS,
        COMPLETELY_SPLIT,
        FILTRATION,
        VERTICES,
        PERIODIC_EDGES,
        ZERO_STRATA,
        LINEAR_EDGES,
        NEG_NIELSEN_PATHS,
        EG_NIELSEN_PATHS,
    )


@dataclass
class PropertyCheck:
    verdict: str
    witnesses: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.verdict == Verdict.YES


@dataclass
class CTCertificate:
    """Verdict and failure witnesses for each CT property."""

    checks: dict[str, PropertyCheck] = field(default_factory=dict)
    rtt_ok: bool = True
    reductions: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.rtt_ok and all(self.checks[p].passed for p in CTProperty.ALL if p in self.checks)

    @property
    def over_budget(self) -> bool:
        return any(c.verdict == Verdict.BUDGET for c in self.checks.values())

    def failures(self) -> list[str]:
        return [p for p, c in self.checks.items() if not c.passed]

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "rtt": self.rtt_ok,
            "properties": {p: {"verdict": c.verdict, "witnesses": c.witnesses} for p, c in self.checks.items()},
        }


def _check(witnesses: list[str]) -> PropertyCheck:
    return PropertyCheck(Verdict.NO if witnesses else Verdict.YES, witnesses)


def _completely_split(f: TopRep, context: SplittingContext) -> PropertyCheck:
    bad = []
    for e in f.graph.edges():
        if f.is_fixed_edge(e):
            continue
        if complete_split(f, f.image(e), context) is None:
            bad.append(f"f({f.graph.name(e)}) = {f.format(f.image(e))}")
    return _check(bad)


def _filtration(f: TopRep, config: Config, cert: CTCertificate) -> PropertyCheck:
    assert f.filtration is not None
    bad = []
    budget = False
    for r, s in enumerate(f.filtration):
        if s.is_eg:
            result = eg_reduction_search(f, r, config)
        elif s.is_neg:
            result = neg_reduction_check(f, r, config)
        else:
            continue
        if result.verdict == Verdict.BUDGET:
            budget = True
        elif not result.reduced:
            cert.reductions.append(result.witness)
            bad.append(f"stratum {r}: {result.case} {result.witness.system.format() if result.witness else ''}")
    bad.extend(f"core gap at {r}" for r in check_core_closure(f))
    if budget and not bad:
        return PropertyCheck(Verdict.BUDGET)
    return _check(bad)


def _vertices(f: TopRep, principal: set[int]) -> PropertyCheck:
    assert f.filtration is not None
    g = f.graph
    bad = []
    for s in f.filtration:
        if not s.is_neg:
            continue
        for e in s.edges:
            ends = (g.init(e), g.term(e)) if f.is_fixed_edge(e) else (g.term(e),)
            for v in ends:
                if v not in principal:
                    bad.append(f"{g.vertex_names[v]} ({g.name(e)})")
    return _check(bad)


def _periodic_edges(f: TopRep) -> PropertyCheck:
    assert f.filtration is not None
    bad = [f"{f.format(s.edges)} is periodic but not fixed" for s in f.filtration if s.kind == StratumKind.NEG]
    bad.extend(f"{name} not attached to the core below" for name in check_periodic_edges(f))
    return _check(bad)


def _zero_strata(f: TopRep) -> PropertyCheck:
    assert f.filtration is not None
    g = f.graph
    strata = list(f.filtration)
    bad = []
    for i, z in enumerate(strata):
        if not z.is_zero:
            continue
        above = next((j for j in range(i + 1, len(strata)) if not strata[j].is_zero), None)
        if above is None or not strata[above].is_eg:
            bad.append(f"zero stratum {i} has no enveloping EG stratum")
            continue
        eg = strata[above]
        taken = {abs(x) for e in eg.edges for x in f.image(e)}
        for e in z.edges:
            if e not in taken:
                bad.append(f"{g.name(e)} is not taken")
        if not subgraph_vertices(g, z.edges) <= subgraph_vertices(g, eg.edges):
            bad.append(f"zero stratum {i} has vertices outside its envelope")
    return _check(bad)


def _linear_edges(f: TopRep) -> PropertyCheck:
    assert f.filtration is not None
    bad = []
    twists: dict[tuple, str] = {}
    for s in f.filtration:
        if s.kind != StratumKind.NEG_LINEAR:
            continue
        name = f.graph.name(s.edges[0])
        w, d = s.axis, s.exponent
        if f.map_path(w) != w or root(w)[1] != 1:
            bad.append(f"{name}: axis {f.format(w)} is not a root-free Nielsen path")
        key = (w, d)
        if key in twists:
            bad.append(f"{name} and {twists[key]} share axis and exponent")
        twists[key] = name
    return _check(bad)


def _neg_nielsen_paths(f: TopRep) -> PropertyCheck:
    assert f.filtration is not None
    bad = []
    for s in f.filtration:
        if s.kind != StratumKind.NEG_NONLINEAR:
            continue
        e = s.edges[0]
        img = f.image(e)
        if not img or img[0] != e:
            bad.append(f"{f.graph.name(e)} does not read E·u")
        elif f.map_path(img[1:]) == img[1:]:
            bad.append(f"{f.graph.name(e)} has a Nielsen suffix but is not linear")
    return _check(bad)


def _eg_nielsen_paths(f: TopRep, config: Config) -> PropertyCheck:
    assert f.filtration is not None
    bad = []
    for r, s in enumerate(f.filtration):
        if not s.is_eg:
            continue
        inps = find_eg_inps(f, r, config)
        if len(inps) > 1:
            bad.append(f"stratum {r} has {len(inps)} iNps")
        for rho in inps:
            ends_in_stratum = abs(rho[0]) in s.edges and abs(rho[-1]) in s.edges
            if not ends_in_stratum or rho[0] == -rho[-1]:
                bad.append(f"iNp {f.format(rho)} does not start and end with distinct edges of stratum {r}")
    return _check(bad)


def verify_ct(f: TopRep, config: Config | None = None) -> CTCertificate:
    """Check the nine CT properties by finite inspection; failures are reported, never raised."""
    cfg = config or get_config()
    log = get_logger()
    if f.filtration is None:
        f = refine_filtration(f)
    cert = CTCertificate(rtt_ok=check_rtt(f).ok)
    context = SplittingContext(f, cfg)
    principal = principal_set(f, cfg)
    cert.checks[CTProperty.ROTATIONLESS] = PropertyCheck(Verdict.YES if is_rotationless(f, cfg) else Verdict.NO)
    cert.checks[CTProperty.COMPLETELY_SPLIT] = _completely_split(f, context)
    cert.checks[CTProperty.FILTRATION] = _filtration(f, cfg, cert)
    cert.checks[CTProperty.VERTICES] = _vertices(f, principal)
    cert.checks[CTProperty.PERIODIC_EDGES] = _periodic_edges(f)
    cert.checks[CTProperty.ZERO_STRATA] = _zero_strata(f)
    cert.checks[CTProperty.LINEAR_EDGES] = _linear_edges(f)
    cert.checks[CTProperty.NEG_NIELSEN_PATHS] = _neg_nielsen_paths(f)
    cert.checks[CTProperty.EG_NIELSEN_PATHS] = _eg_nielsen_paths(f, cfg)
    if cert.passed:
        log.debug("CT verified")
    else:
        log.debug(f"CT check failed: {cert.failures() or ['rtt']}")
    return cert
