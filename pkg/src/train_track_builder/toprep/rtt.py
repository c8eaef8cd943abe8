"""Relative train track maps: the RTT checks, the improvement loop and its ledger."""

from dataclasses import dataclass, field
from typing import Sequence

from train_track_builder.core.config import Config, get_config
from train_track_builder.core.exceptions import BudgetExceededError, NotInvariantError
from train_track_builder.core.logger import get_logger
from train_track_builder.ffs.system import FreeFactorSystem, rose
from train_track_builder.ffs.whitehead import standardize, unused_letters
from train_track_builder.graphs.automorphism import Automorphism
from train_track_builder.graphs.ggraph import based_stallings_graph
from train_track_builder.graphs.graph import MarkedGraph
from train_track_builder.graphs.words import Alphabet, Word, inverse, reduce_word
from train_track_builder.toprep.moves import (
    collapse_edge,
    collapse_forest,
    fold_turn,
    pretrivial_forest,
    remove_valence_one,
    subdivide,
)
from train_track_builder.toprep.perron import PFValue, pf_eigenvector
from train_track_builder.toprep.toprep import TopRep, refine_filtration


@dataclass(frozen=True)
class RTTFailure:
    stratum: int
    condition: str  # "i", "ii" or "iii"
    witness: tuple


@dataclass
class RTTCheck:
    failures: list[RTTFailure] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def for_stratum(self, r: int) -> list[RTTFailure]:
        return [x for x in self.failures if x.stratum == r]


@dataclass(frozen=True)
class LedgerEntry:
    iteration: int
    move: str
    lambdas: tuple[PFValue, ...]
    forced_tightening: bool = False
    condition: str = ""  # RTT condition the move repaired, empty for the start
    num_edges: int = 0

    def floats(self) -> tuple[float, ...]:
        return tuple(float(x) for x in self.lambdas)


class RTTLedger(list):
    """Iteration log of the improvement loop: move applied and the complexity afterwards."""

    def record(
        self, iteration: int, move: str, f: TopRep, forced_tightening: bool = False, condition: str = ""
    ) -> LedgerEntry:
        lambdas = _lambda_sequence(f)
        entry = LedgerEntry(iteration, move, lambdas, forced_tightening, condition, f.graph.num_edges)
        self.append(entry)
        get_logger().debug(f"rtt[{iteration}] {move}: Λ = {[round(x, 6) for x in entry.floats()]}")
        return entry

    def repairs(self) -> list[LedgerEntry]:
        return [e for e in self if e.condition]

    def is_non_increasing(self) -> bool:
        return all(b.lambdas <= a.lambdas for a, b in zip(self, self[1:]))

    def repairs_strictly_decrease(self) -> bool:
        """No repair raises Λ(f), and every fold that forced tightening lowers it strictly."""
        for a, b in zip(self, self[1:]):
            if not b.condition:
                continue
            if b.lambdas > a.lambdas:
                return False
            if b.forced_tightening and not b.lambdas < a.lambdas:
                return False
        return True


def _lambda_sequence(f: TopRep) -> tuple[PFValue, ...]:
    if f.filtration is None:
        return ()
    return tuple(sorted((s.pf for s in f.filtration if s.is_eg and s.pf is not None), reverse=True))


# ----------------------------------------------------------------------
# Checks
# ----------------------------------------------------------------------


def connecting_paths(f: TopRep, r: int) -> list[tuple[int, Word]]:
    """Maximal subpaths of ``f(E)`` (E in H_r) lying in G_{r-1}, with the edge they come from."""
    assert f.filtration is not None
    stratum = set(f.filtration[r].edges)
    out = []
    for e in sorted(stratum):
        img = f.image(e)
        current: list[int] = []
        for x in img:
            if abs(x) in stratum:
                if current:
                    out.append((e, tuple(current)))
                current = []
            else:
                current.append(x)
        if current:
            out.append((e, tuple(current)))
    return out


def check_rtt(f: TopRep) -> RTTCheck:
    """RTT-i, RTT-ii and RTT-iii for every EG stratum."""
    if f.filtration is None:
        f = refine_filtration(f)
    assert f.filtration is not None
    result = RTTCheck()
    for r, s in enumerate(f.filtration):
        if not s.is_eg:
            continue
        stratum = set(s.edges)
        for e in s.edges:
            for d in (e, -e):
                target = f.df(d)
                if target is None or abs(target) not in stratum:
                    result.failures.append(RTTFailure(r, "i", (d,)))
        for e, sigma in connecting_paths(f, r):
            img = f.image(e)
            inner = 0 < _index_of(img, sigma) and _index_of(img, sigma) + len(sigma) < len(img)
            if inner and not f.map_path(sigma):
                result.failures.append(RTTFailure(r, "ii", (e, sigma)))
        for e in s.edges:
            for d1, d2 in f.turns(f.image(e)):
                if abs(d1) in stratum and abs(d2) in stratum and not f.is_legal_turn(d1, d2):
                    result.failures.append(RTTFailure(r, "iii", (e, d1, d2)))
    return result


def _index_of(path: Sequence[int], sub: Sequence[int]) -> int:
    n = len(sub)
    for i in range(len(path) - n + 1):
        if tuple(path[i : i + n]) == tuple(sub):
            return i
    return -1


# ----------------------------------------------------------------------
# Realizing a free factor system
# ----------------------------------------------------------------------


def _tail_label(graph) -> Word:
    """Label of the path from the basepoint of a based Stallings graph to its core."""
    bp = graph.basepoint
    if graph.valence(bp) != 1:
        return ()
    label, x, _ = graph.germs[bp][0]
    out = [label]
    prev = bp
    while graph.valence(x) == 2:
        nxt = [(lab, y) for lab, y, _ in graph.germs[x] if lab != -out[-1] or y != prev]
        lab, y = nxt[0]
        out.append(lab)
        prev, x = x, y
    return tuple(out)


def realize_system(phi: Automorphism, system: FreeFactorSystem) -> TopRep:
    """Star of roses: one rose per component at its own vertex, joined to the base by an edge.

    The union of the component roses is an invariant subgraph whose class is
    ``system``.
    """
    n = phi.rank
    names = phi.names
    theta, blocks = standardize(system)
    psi = theta.compose(phi).compose(theta.inverse())
    base_graph = rose(names.names)
    block_of = {x: j for j, b in enumerate(blocks) for x in b}
    free = unused_letters(n, blocks)

    edge_names = list(names.names)
    alphabet = Alphabet(tuple(edge_names))
    t_ids = []
    for _ in blocks:
        name = alphabet.fresh("t")
        edge_names.append(name)
        alphabet = Alphabet(tuple(edge_names))
        t_ids.append(len(edge_names))
    vertex_names = ["*"] + [f"v{j + 1}" for j in range(len(blocks))]
    tails = [0 if x in free else block_of[x] + 1 for x in range(1, n + 1)] + [0] * len(blocks)
    heads = tails[:n] + [j + 1 for j in range(len(blocks))]

    def to_graph(word: Sequence[int]) -> Word:
        out: list[int] = []
        for x in word:
            j = block_of.get(abs(x))
            if j is None:
                out.append(x)
            else:
                out.extend((t_ids[j], x, -t_ids[j]))
        return reduce_word(out)

    target_of: dict[int, int] = {}
    conj: dict[int, Word] = {}
    for j, block in enumerate(blocks):
        graph = based_stallings_graph([psi((x,)) for x in block], base_graph)
        c = _tail_label(graph)
        letters = {abs(lab) for _, _, lab in graph.core().edges}
        matches = [k for k, b in enumerate(blocks) if set(b) == letters]
        if not matches:
            raise NotInvariantError("free factor system is not invariant")
        target_of[j], conj[j] = matches[0], c

    images: list[Word] = []
    for x in range(1, n + 1):
        j = block_of.get(x)
        if j is None:
            images.append(to_graph(psi((x,))))
            continue
        local = reduce_word(inverse(conj[j]) + psi((x,)) + conj[j])
        if any(block_of.get(abs(y)) != target_of[j] for y in local):
            raise NotInvariantError("free factor system is not invariant")
        images.append(local)
    for j in range(len(blocks)):
        images.append(reduce_word(to_graph(conj[j]) + (t_ids[target_of[j]],)))
    vertex_map = [0] + [target_of[j] + 1 for j in range(len(blocks))]

    theta_images = [to_graph(theta((x,))) for x in range(1, n + 1)]
    graph = MarkedGraph(alphabet, tuple(vertex_names), tuple(tails), tuple(heads), 0, names, tuple(theta_images))
    realized = frozenset(x for b in blocks for x in b)
    return TopRep(graph, tuple(vertex_map), tuple(images), None, (realized,))


# ----------------------------------------------------------------------
# Improvement loop
# ----------------------------------------------------------------------


def _valence_two(f: TopRep) -> TopRep | None:
    g = f.graph
    assert f.filtration is not None
    for v in range(g.num_vertices):
        star = g.star(v)
        if len(star) != 2 or abs(star[0]) == abs(star[1]):
            continue
        e1, e2 = abs(star[0]), abs(star[1])
        r = f.filtration.height(e1)
        same = f.filtration.height(e2) == r
        if not same and not (f.is_fixed_edge(e1) and f.is_fixed_edge(e2)):
            continue
        s = f.filtration[r]
        pick = e2
        if same and s.is_eg:
            vec = pf_eigenvector(s.matrix)
            weight = {e: vec[i] for i, e in enumerate(s.edges)}
            pick = e1 if weight[e1] < weight[e2] else e2
        other = g.term(pick) if g.init(pick) == v else g.init(pick)
        return collapse_edge(f, pick, other)
    return None


def tidy(f: TopRep) -> TopRep:
    """Collapse pretrivial forests and remove valence-one and valence-two vertices."""
    while True:
        forest = pretrivial_forest(f)
        if forest:
            f = collapse_forest(f, forest)
            continue
        smaller = remove_valence_one(f)
        if smaller is not None:
            f = smaller
            continue
        f = refine_filtration(f)
        smaller = _valence_two(f)
        if smaller is not None:
            f = smaller
            continue
        return f


def _turn_in_images(f: TopRep, d1: int, d2: int) -> bool:
    wanted = {(d1, d2), (d2, d1)}
    return any(t in wanted for e in f.graph.edges() for t in f.turns(f.image(e)))


def _illegal_fold(f: TopRep, d1: int, d2: int) -> tuple[TopRep, bool]:
    """Fold the first turn in the orbit of ``(d1, d2)`` that Df identifies.

    The flag is set when the folded turn occurs in an edge image, so the fold tightens some f(E).
    """
    k = 0
    a, b = d1, d2
    while True:
        na, nb = f.df(a), f.df(b)
        k += 1
        if na == nb:
            return fold_turn(f, a, b), k == 1 and _turn_in_images(f, a, b)
        a, b = na, nb  # type: ignore[assignment]


def _core_subdivision(f: TopRep, r: int, d: int) -> TopRep:
    assert f.filtration is not None
    stratum = set(f.filtration[r].edges)
    img = f.image(d)
    i = 0
    while i < len(img) and abs(img[i]) not in stratum:
        i += 1
    e = abs(d)
    if d > 0:
        return subdivide(f, e, i)[0]
    return subdivide(f, e, len(img) - i)[0]


def _collapse_connecting(f: TopRep, sigma: Word) -> TopRep | None:
    edges = {abs(x) for x in sigma}
    if len(edges) != len(sigma):
        return None
    g = f.graph
    vertices = {g.init(sigma[0])} | {g.term(x) for x in sigma}
    if len(vertices) != len(sigma) + 1:
        return None
    return collapse_forest(f, edges)


def repair(f: TopRep, failure: RTTFailure) -> tuple[TopRep, str, bool]:
    """Apply the move that addresses one RTT failure."""
    if failure.condition == "i":
        return _core_subdivision(f, failure.stratum, failure.witness[0]), "core subdivision", False
    if failure.condition == "ii":
        sigma = failure.witness[1]
        collapsed = _collapse_connecting(f, sigma)
        if collapsed is not None:
            return collapsed, "collapse inessential connecting path", False
        for i in range(len(sigma) - 1):
            if f.df(-sigma[i]) == f.df(sigma[i + 1]):
                return fold_turn(f, -sigma[i], sigma[i + 1]), "fold connecting path", False
        raise BudgetExceededError("inessential connecting path admits no move", partial=f)
    _, d1, d2 = failure.witness
    folded, forced = _illegal_fold(f, d1, d2)
    return folded, "fold", forced


def rtt_from(
    f: TopRep,
    systems: Sequence[FreeFactorSystem] = (),
    ledger: RTTLedger | None = None,
    config: Config | None = None,
) -> TopRep:
    """Run the improvement loop from a given representative."""
    cfg = config or get_config()
    log = get_logger()
    ledger = ledger if ledger is not None else RTTLedger()
    move, forced, condition = "start", False, ""
    for iteration in range(cfg.MAX_RTT_ITERATIONS):
        f = tidy(f)
        ledger.record(iteration, move, f, forced, condition)
        check = check_rtt(f)
        if check.ok:
            log.debug(f"relative train track after {iteration} moves")
            return refine_filtration(f, [s for s in systems if not s.is_empty() and not s.is_full()])
        failure = check.failures[0]
        f, move, forced = repair(f, failure)
        condition = failure.condition
    raise BudgetExceededError(f"no relative train track within {cfg.MAX_RTT_ITERATIONS} moves", partial=f)


def rtt(
    phi: Automorphism,
    systems: Sequence[FreeFactorSystem] = (),
    ledger: RTTLedger | None = None,
    config: Config | None = None,
) -> TopRep:
    """Relative train track representative of ``phi`` realizing each system in ``systems``."""
    phi.inverse()
    proper = [s for s in systems if not s.is_empty() and not s.is_full()]
    if proper:
        smallest = min(proper, key=lambda s: s.complexity)
        f = realize_system(phi, smallest)
    else:
        f = TopRep.from_automorphism(phi)
    return rtt_from(f, proper, ledger, config)


__all__ = [
    "LedgerEntry",
    "RTTCheck",
    "RTTFailure",
    "RTTLedger",
    "check_rtt",
    "connecting_paths",
    "realize_system",
    "repair",
    "rtt",
    "rtt_from",
    "tidy",
]
