"""Fixed subgroups of automorphisms and their possible conjugacy classes."""

from dataclasses import dataclass, field

import networkx as nx

from train_track_builder.core.config import Config, get_config
from train_track_builder.core.logger import get_logger
from train_track_builder.ct.pipeline import build_ct
from train_track_builder.ffs.system import rose
from train_track_builder.fixgraph.stallings import Variant, closed_path_at, stallings_fixed_graph
from train_track_builder.graphs.automorphism import Automorphism, find_conjugator
from train_track_builder.graphs.ggraph import AnnotatedFolding, based_stallings_graph
from train_track_builder.graphs.words import Alphabet, Word, cyclic_reduce, inverse, reduce_word, root, split_cyclic
from train_track_builder.nielsen.fixed_point import FixedPointResult, find_fixed_point
from train_track_builder.nielsen.lifts import Lift
from train_track_builder.nielsen.principal import fixed_subgraph
from train_track_builder.nielsen.rotationless import rotationless_power
from train_track_builder.toprep.rtt import rtt
from train_track_builder.toprep.toprep import TopRep


class FixCase:
    """Constants for how a fixed subgroup was found."""

    ROTATIONLESS = "rotationless-nonempty-fix"
    EMPTY_TRIVIAL = "rotationless-empty-fix-trivial"
    EMPTY_CYCLIC = "rotationless-empty-fix-cyclic"
    PERIODIC = "periodic"
    COMPOSITE = "composite"


@dataclass
class FixReport:
    """A free basis of ``Fix(Φ)`` as words in the original generators."""

    names: Alphabet
    generators: list[Word]
    case: str
    eta: Word = ()
    exponent: int = 1
    ct: TopRep | None = field(default=None, repr=False)

    @property
    def rank(self) -> int:
        return len(self.generators)

    def contains(self, word: Word) -> bool:
        """Membership by reading ``word`` in the folded subgroup graph."""
        word = reduce_word(word)
        if not word:
            return True
        if not self.generators:
            return False
        return based_stallings_graph(self.generators, rose(self.names.names)).accepts(word)

    def to_json(self) -> dict:
        out = {
            "case": self.case,
            "rank": self.rank,
            "generators": [self.names.format(w) or "1" for w in self.generators],
            "exponent": self.exponent,
        }
        if self.ct is not None:
            out["eta"] = self.ct.format(self.eta)
        return out


@dataclass
class FixClass:
    generators: list[Word]
    principal: bool

    @property
    def rank(self) -> int:
        return len(self.generators)

    @property
    def root_free(self) -> bool:
        return all(root(cyclic_reduce(w))[1] == 1 for w in self.generators)


def _root_of(w: Word) -> Word:
    p, c = split_cyclic(w)
    r, _ = root(c)
    return reduce_word(p + r + inverse(p))


def _substitute(basis: list[Word], w: Word) -> Word:
    out: list[int] = []
    for x in w:
        out.extend(basis[x - 1] if x > 0 else inverse(basis[-x - 1]))
    return reduce_word(out)


# ----------------------------------------------------------------------
# Rotationless case
# ----------------------------------------------------------------------


def _empty_fix(phi: Automorphism, f: TopRep, found: FixedPointResult) -> FixReport:
    """The lift fixes no vertex: Fix(Φ) is trivial or generated by the root of one translation."""
    g = f.graph
    sigma = found.generator
    if sigma and g.init(sigma[0]) == g.term(sigma[-1]):
        c = closed_path_at(f, found.at, sigma)
        for candidate in (_root_of(c), c):
            if candidate and phi(candidate) == candidate:
                return FixReport(phi.names, [candidate], FixCase.EMPTY_CYCLIC, found.at, ct=f)
    return FixReport(phi.names, [], FixCase.EMPTY_TRIVIAL, found.at, ct=f)


def rotationless_fix(phi: Automorphism, config: Config | None = None) -> FixReport:
    """Fix(Φ) for Φ representing a rotationless class, through S(f) at the fixed point of its lift."""
    cfg = config or get_config()
    f, _ = build_ct(phi, config=cfg)
    lift = Lift.for_automorphism(f, phi)
    found = find_fixed_point(f, lift, cfg)
    if not found.is_fixed:
        return _empty_fix(phi, f, found)
    assert found.vertex is not None
    p = found.vertex
    g = f.graph
    v = g.term(p[-1]) if p else g.base
    s = stallings_fixed_graph(f, Variant.S, cfg)
    loops = s.fundamental_group(s.vertex_of[v])
    generators = [closed_path_at(f, p, loop) for loop in loops]
    return FixReport(phi.names, generators, FixCase.ROTATIONLESS, p, ct=f)


# ----------------------------------------------------------------------
# Periodic case
# ----------------------------------------------------------------------


def _circumcenter(lift: Lift, order: int) -> Word | None:
    """A cover vertex fixed by a lift of finite order, None if only an edge midpoint is fixed."""
    orbit: list[Word] = [()]
    for _ in range(order):
        nxt = lift.image(orbit[-1])
        if nxt == orbit[0]:
            break
        orbit.append(nxt)
    best, pair = -1, (0, 0)
    for i, p in enumerate(orbit):
        for j in range(i, len(orbit)):
            d = len(reduce_word(inverse(p) + orbit[j]))
            if d > best:
                best, pair = d, (i, j)
    p = orbit[pair[0]]
    geodesic = reduce_word(inverse(p) + orbit[pair[1]])
    half = len(geodesic) // 2
    for cut in (half, half + 1) if len(geodesic) % 2 else (half,):
        q = reduce_word(p + geodesic[:cut])
        if lift.is_fixed(q):
            return q
    found = lift.ball(len(geodesic) + 1).fixed_vertices()
    return found[0] if found else None


def periodic_fix(phi: Automorphism, order: int, config: Config | None = None) -> FixReport:
    """Fix(Φ) when some power ``Φ^order`` is inner."""
    cfg = config or get_config()
    c = find_conjugator(phi.power(order), Automorphism.identity(phi.rank, phi.names))
    if c:
        # Φ^order = i_c, so Fix(Φ) lies in the centralizer of c
        r = _root_of(c)
        return FixReport(phi.names, [r] if phi(r) == r else [c], FixCase.PERIODIC, exponent=order)
    f = rtt(phi, config=cfg)
    lift = Lift.for_automorphism(f, phi)
    q = _circumcenter(lift, order)
    if q is None:
        return FixReport(phi.names, [], FixCase.PERIODIC, exponent=order, ct=f)
    g = f.graph
    v = g.term(q[-1]) if q else g.base
    fix = fixed_subgraph(f)
    comp = nx.node_connected_component(fix, v)
    edges = {e for e in g.edges() if f.is_fixed_edge(e) and g.init(e) in comp}
    loops = g.cycle_basis(edges, v)
    generators = [closed_path_at(f, q, loop) for loop in loops]
    return FixReport(phi.names, generators, FixCase.PERIODIC, q, order, f)


# ----------------------------------------------------------------------
# General case
# ----------------------------------------------------------------------


def compute_fix(phi: Automorphism, config: Config | None = None) -> FixReport:
    """Free basis of ``Fix(Φ)``.

    With ``k`` the rotationless exponent: ``k = 1`` is read off S(f); if
    ``Φ^k`` is inner the periodic construction applies; otherwise Φ acts
    periodically on ``Fix(Φ^k)`` and the fixed subgroup of that action is
    computed in a basis of ``Fix(Φ^k)``.
    """
    cfg = config or get_config()
    log = get_logger()
    k, _ = rotationless_power(phi, cfg)
    if k == 1:
        return rotationless_fix(phi, cfg)
    if phi.power(k).is_inner():
        return periodic_fix(phi, k, cfg)
    inner = rotationless_fix(phi.power(k), cfg)
    basis = inner.generators
    log.debug(f"Fix of the power {k} has rank {len(basis)}")
    if len(basis) <= 1:
        generators = [h for h in basis if phi(h) == h]
        return FixReport(phi.names, generators, FixCase.COMPOSITE, inner.eta, k, inner.ct)
    folding = AnnotatedFolding(basis, phi.rank)
    images = tuple(folding.express(phi(h)) for h in basis)
    psi = Automorphism(Alphabet.standard(len(basis)), images)
    restricted = periodic_fix(psi, k, cfg)
    generators = [_substitute(basis, w) for w in restricted.generators]
    return FixReport(phi.names, generators, FixCase.COMPOSITE, inner.eta, k, inner.ct)


def fix_possibilities(phi: Automorphism, config: Config | None = None) -> list[FixClass]:
    """Conjugacy classes of ``Fix(Φ)`` over principal lifts, one per component of PS(f)."""
    cfg = config or get_config()
    f, _ = build_ct(phi, config=cfg)
    ps = stallings_fixed_graph(f, Variant.PS, cfg)
    g = f.graph
    stage_of = {s: v for v, s in ps.vertex_of.items()}
    out = []
    for comp in ps.components():
        vertex = next((s for s in comp if s in stage_of), None)
        if vertex is None:
            continue
        eta = g.tree_path(stage_of[vertex])
        generators = [closed_path_at(f, eta, loop) for loop in ps.fundamental_group(vertex)]
        out.append(FixClass(generators, any(s in ps.principal for s in comp)))
    return out


__all__ = [
    "FixCase",
    "FixClass",
    "FixReport",
    "compute_fix",
    "fix_possibilities",
    "periodic_fix",
    "rotationless_fix",
]
