"""Construction of a CT from a rotationless outer automorphism."""

from typing import Sequence

from train_track_builder.core.config import Config, Verdict, get_config
from train_track_builder.core.exceptions import (
    BudgetExceededError,
    NonCompletionError,
    NotInvariantError,
    NotRealizableError,
    StructuralError,
)
from train_track_builder.core.logger import get_logger
from train_track_builder.ct.reduction import ReductionResult, eg_reduction_search, neg_reduction_check
from train_track_builder.ct.verify import CTCertificate, verify_ct
from train_track_builder.ffs.system import FreeFactorSystem
from train_track_builder.graphs.automorphism import Automorphism
from train_track_builder.graphs.words import Word, concat, inverse, reduce_word
from train_track_builder.nielsen.fixed_point import find_fixed_point
from train_track_builder.nielsen.lifts import Lift
from train_track_builder.nielsen.principal import principal_set
from train_track_builder.toprep.moves import slide
from train_track_builder.toprep.normalize import normalize_representative
from train_track_builder.toprep.rtt import RTTLedger, rtt
from train_track_builder.toprep.toprep import TopRep, refine_filtration


def _realize(phi: Automorphism, chain: list[FreeFactorSystem], ledger: RTTLedger, cfg: Config) -> TopRep:
    try:
        return rtt(phi, chain, ledger, cfg)
    except (NotRealizableError, NotInvariantError):
        if len(chain) < 2:
            raise
    # the chain is not nested; realize the newest reduction on its own
    get_logger().debug("chain is not realizable at once, keeping the last reduction")
    del chain[:-1]
    return rtt(phi, chain, ledger, cfg)


def find_reduction(f: TopRep, config: Config) -> ReductionResult | None:
    """First non-reduced filtration step from the bottom, None when all are reduced.

    A ``BUDGET`` verdict is returned as is.
    """
    assert f.filtration is not None
    for r, s in enumerate(f.filtration):
        if s.is_eg:
            result = eg_reduction_search(f, r, config)
        elif s.is_neg:
            result = neg_reduction_check(f, r, config)
        else:
            continue
        if not result.reduced:
            return result
    return None


def slide_target(f: TopRep, e: int, config: Config) -> Word | None:
    """Path along which the terminal end of the NEG edge ``e`` slides to a fixed vertex.

    The lift fixing the initial vertex of a lift of ``e`` is walked from the
    terminal vertex of that lift; None when the walk finds no fixed point.
    """
    g = f.graph
    q = g.path_between(g.base, g.init(e))
    if q is None:
        return None
    rho = concat(q, inverse(f.map_path(q)))
    lift = Lift(f, rho)
    start = reduce_word(q + (e,))
    try:
        result = find_fixed_point(f, lift, config, start=start)
    except BudgetExceededError:
        return None
    if not result.is_fixed:
        return None
    assert result.vertex is not None
    return concat(inverse(start), result.vertex)


def slide_neg_edges(f: TopRep, config: Config | None = None) -> TopRep:
    """Move terminal ends of non-fixed NEG edges to principal vertices."""
    cfg = config or get_config()
    log = get_logger()
    for _ in range(f.graph.num_edges):
        if f.filtration is None:
            f = refine_filtration(f)
        assert f.filtration is not None
        principal = principal_set(f, cfg)
        g = f.graph
        moved = False
        for s in f.filtration:
            if not s.is_neg or len(s.edges) != 1:
                continue
            e = s.edges[0]
            if f.is_fixed_edge(e) or g.term(e) in principal:
                continue
            gamma = slide_target(f, e, cfg)
            if not gamma or e in {abs(x) for x in gamma}:
                continue
            log.debug(f"sliding {g.name(e)} along {f.format(gamma)}")
            try:
                f = refine_filtration(slide(f, e, gamma))
            except StructuralError as exc:
                log.debug(f"slide of {g.name(e)} rejected: {exc}")
                continue
            moved = True
            break
        if not moved:
            break
    return f


def build_ct(
    phi: Automorphism,
    systems: Sequence[FreeFactorSystem] = (),
    config: Config | None = None,
    ledger: RTTLedger | None = None,
) -> tuple[TopRep, CTCertificate]:
    """CT representing ``phi`` (assumed rotationless) whose filtration realizes ``systems``.

    Every reduction found enlarges the chain of realized systems and the
    construction starts over; at most ``2n`` restarts are made.
    """
    cfg = config or get_config()
    log = get_logger()
    ledger = ledger if ledger is not None else RTTLedger()
    chain = [s for s in systems if s.is_proper()]
    restarts = cfg.restarts_for(phi.rank)
    f: TopRep | None = None
    for attempt in range(restarts + 1):
        f = normalize_representative(_realize(phi, chain, ledger, cfg), exponent=1, config=cfg)
        found = find_reduction(f, cfg)
        if found is not None and found.verdict == Verdict.BUDGET:
            raise BudgetExceededError("reduction search over budget", partial=f)
        if found is not None and found.witness is not None:
            log.info(f"restart {attempt + 1}: {found.witness.kind} {found.witness.system.format()}")
            chain.append(found.witness.system)
            continue
        f = normalize_representative(slide_neg_edges(f, cfg), exponent=1, config=cfg)
        cert = verify_ct(f, cfg)
        if cert.passed:
            log.success(f"CT with {f.graph.num_edges} edges after {attempt} restarts")
            return f, cert
        if cert.over_budget:
            raise BudgetExceededError("CT verification over budget", partial=f)
        raise NonCompletionError(f"CT checks failed: {', '.join(cert.failures()) or 'RTT'}", partial=(f, cert))
    raise NonCompletionError(f"no CT within {restarts} restarts", partial=f)


__all__ = ["build_ct", "find_reduction", "slide_neg_edges", "slide_target"]
