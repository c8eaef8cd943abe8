"""Normalization of relative train track maps.

Brings a relative train track map into the shape the CT machinery expects:
fixed points inside edges become vertices, non-fixed NEG edges read
``f(E) = E·u``, zero strata sit directly below the EG stratum that envelops
them, and strata are ordered so that filtration elements are closed under cores.
"""

from dataclasses import dataclass, field

from train_track_builder.core.config import Config, get_config
from train_track_builder.core.exceptions import NonCompletionError
from train_track_builder.core.logger import get_logger
from train_track_builder.toprep.moves import reorient, subdivide_at_fixed_point
from train_track_builder.toprep.toprep import Filtration, Stratum, TopRep, core_subgraph, refine_filtration


@dataclass
class NormalizationNotes:
    """What normalization changed or could not change."""

    subdivided: list[str] = field(default_factory=list)
    reoriented: list[str] = field(default_factory=list)
    moved_zero_strata: list[int] = field(default_factory=list)
    core_gaps: list[int] = field(default_factory=list)
    periodic_gaps: list[str] = field(default_factory=list)
    exponent: int = 1
    regrouped: bool = False


def interior_fixed_point(f: TopRep, e: int) -> int | None:
    """Position in ``f(e)`` of an occurrence of ``±e`` that carries an interior fixed point."""
    img = f.image(e)
    m = len(img)
    for pos, x in enumerate(img):
        if x == -e:
            return pos
        if x == e and 0 < pos < m - 1:
            return pos
    return None


def subdivide_fixed_points(f: TopRep, notes: NormalizationNotes | None = None) -> TopRep:
    """Make every isolated fixed point in the interior of an edge a vertex."""
    notes = notes or NormalizationNotes()
    changed = True
    while changed:
        changed = False
        for e in f.graph.edges():
            if f.is_fixed_edge(e):
                continue
            pos = interior_fixed_point(f, e)
            if pos is not None:
                notes.subdivided.append(f.graph.name(e))
                f, _, _ = subdivide_at_fixed_point(f, e, pos)
                changed = True
                break
    return f


def orient_neg_edges(f: TopRep, notes: NormalizationNotes | None = None) -> TopRep:
    """Reverse NEG edges whose image ends with the edge so that ``f(E) = E·u``."""
    notes = notes or NormalizationNotes()
    if f.filtration is None:
        f = refine_filtration(f)
    assert f.filtration is not None
    for s in f.filtration:
        if not s.is_neg or len(s.edges) != 1:
            continue
        e = s.edges[0]
        img = f.image(e)
        if len(img) > 1 and img[-1] == e and img[0] != e:
            notes.reoriented.append(f.graph.name(e))
            f = reorient(f, e)
    return f


def _respects_images(f: TopRep, strata: list[Stratum]) -> bool:
    seen: set[int] = set()
    for s in strata:
        seen.update(s.edges)
        for e in s.edges:
            if any(abs(x) not in seen for x in f.image(e)):
                return False
    return True


def place_zero_strata(f: TopRep, notes: NormalizationNotes | None = None) -> TopRep:
    """Move every zero stratum directly below the lowest EG stratum whose images cross it."""
    notes = notes or NormalizationNotes()
    assert f.filtration is not None
    strata = list(f.filtration)
    for z in [s for s in strata if s.is_zero]:
        i = strata.index(z)
        envelope = None
        for j in range(i + 1, len(strata)):
            s = strata[j]
            if s.is_eg and any(abs(x) in z.edges for e in s.edges for x in f.image(e)):
                envelope = j
                break
        if envelope is None or envelope == i + 1:
            continue
        trial = strata[:i] + strata[i + 1 : envelope] + [z] + strata[envelope:]
        if _respects_images(f, trial):
            strata = trial
            notes.moved_zero_strata.append(envelope - 1)
    return f.with_filtration(Filtration(tuple(strata)))


def check_core_closure(f: TopRep, notes: NormalizationNotes | None = None) -> list[int]:
    """Indices ``r`` whose core ``core(G_r)`` is not a filtration element."""
    notes = notes or NormalizationNotes()
    assert f.filtration is not None
    elements = [f.filtration.element(r) for r in range(len(f.filtration))]
    gaps = []
    for r, g_r in enumerate(elements):
        core = core_subgraph(f.graph, g_r)
        if core and core not in elements:
            gaps.append(r)
    notes.core_gaps.extend(gaps)
    return gaps


def _units(strata: list[Stratum]) -> list[tuple[Stratum, ...]]:
    """Strata that move together: a zero stratum stays glued to the EG stratum above it."""
    units: list[tuple[Stratum, ...]] = []
    i = 0
    while i < len(strata):
        if strata[i].is_zero and i + 1 < len(strata) and strata[i + 1].is_eg:
            units.append((strata[i], strata[i + 1]))
            i += 2
        else:
            units.append((strata[i],))
            i += 1
    return units


def close_under_cores(f: TopRep, config: Config | None = None) -> TopRep:
    """Reorder strata so that the core of every filtration element is a filtration element.

    The order stays compatible with edge images, zero strata stay directly
    below their envelopes and realized subgraphs stay filtration elements.
    The search is depth first in the current order, so it returns the
    closest such ordering. A filtration that is already closed is returned
    as is.
    """
    assert f.filtration is not None
    if not check_core_closure(f):
        return f
    cfg = config or get_config()
    g = f.graph
    units = _units(list(f.filtration))
    own = [frozenset(e for s in u for e in s.edges) for u in units]
    needs = [frozenset(abs(x) for e in own[i] for x in f.image(e)) - own[i] for i in range(len(units))]
    current = {f.filtration.element(r) for r in range(len(f.filtration))}
    targets = [k for k in f.realized if k in current]
    budget = [cfg.BUDGET]

    def search(order: list[int], placed: frozenset[int], elements: set[frozenset[int]]) -> list[int] | None:
        if len(order) == len(units):
            return order if all(k in elements for k in targets) else None
        for i in range(len(units)):
            if i in order or not needs[i] <= placed:
                continue
            budget[0] -= 1
            if budget[0] < 0:
                return None
            grown, added, ok = placed, set(elements), True
            for s in units[i]:
                grown = grown | frozenset(s.edges)
                added.add(grown)
                core = core_subgraph(g, grown)
                if core and core not in added:
                    ok = False
                    break
            if ok:
                found = search(order + [i], grown, added)
                if found is not None:
                    return found
        return None

    order = search([], frozenset(), set())
    if order is None:
        raise NonCompletionError("no stratum order closes the filtration under cores", partial=f)
    strata = tuple(s for i in order for s in units[i])
    return f.with_filtration(Filtration(strata))


def check_periodic_edges(f: TopRep, notes: NormalizationNotes | None = None) -> list[str]:
    """Fixed non-loop edges whose endpoints are not both in the core of the filtration element below.

    Only the existing filtration elements are searched.
    """
    notes = notes or NormalizationNotes()
    assert f.filtration is not None
    g = f.graph
    gaps = []
    for r, s in enumerate(f.filtration):
        if len(s.edges) != 1 or not f.is_fixed_edge(s.edges[0]):
            continue
        e = s.edges[0]
        if g.init(e) == g.term(e):
            continue
        core = core_subgraph(g, f.filtration.below(r))
        touched = {g.init(k) for k in core} | {g.term(k) for k in core}
        if g.init(e) not in touched or g.term(e) not in touched:
            gaps.append(g.name(e))
    notes.periodic_gaps.extend(gaps)
    return gaps


def rotationless_exponent(f: TopRep, config: Config | None = None) -> int:
    """Least ``K`` found with ``f^K`` rotationless."""
    from train_track_builder.nielsen.rotationless import is_rotationless, rotationless_power

    if is_rotationless(f, config):
        return 1
    k, _ = rotationless_power(f.automorphism(), config, f)
    return k


def normalize_representative(
    f: TopRep, notes: NormalizationNotes | None = None, exponent: int | None = None, config: Config | None = None
) -> TopRep:
    """Normalize a relative train track map; ``notes`` collects what was done.

    Fixed points are taken for ``f^K`` with ``K = exponent``, detected when
    not given; for ``K > 1`` the result represents the power. Raises
    ``NonCompletionError`` when the strata cannot be ordered with core closure.
    """
    notes = notes if notes is not None else NormalizationNotes()
    log = get_logger()
    if f.filtration is None:
        f = refine_filtration(f)
    k = exponent if exponent is not None else rotationless_exponent(f, config)
    if k > 1:
        log.info(f"normalizing the rotationless power {k}")
        f = refine_filtration(f.power(k), realize=f.realized)
    notes.exponent = k
    f = subdivide_fixed_points(f, notes)
    f = refine_filtration(f)
    f = orient_neg_edges(f, notes)
    f = refine_filtration(f)
    f = place_zero_strata(f, notes)
    if check_core_closure(f, notes):
        log.debug(f"regrouping strata for core closure at {notes.core_gaps}")
        f = close_under_cores(f, config)
        notes.regrouped = True
    check_periodic_edges(f, notes)
    if notes.subdivided or notes.reoriented:
        log.debug(f"normalized: subdivided {notes.subdivided}, reoriented {notes.reoriented}")
    return f
