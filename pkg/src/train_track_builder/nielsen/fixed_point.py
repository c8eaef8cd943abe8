"""Deciding whether a lift fixes a point of the universal cover."""

from dataclasses import dataclass, field

from train_track_builder.core.config import Config, get_config
from train_track_builder.core.exceptions import BudgetExceededError, DegenerateRayError, LiftError, StructuralError
from train_track_builder.core.logger import get_logger
from train_track_builder.graphs.words import Word, reduce_word
from train_track_builder.nielsen.lifts import Lift
from train_track_builder.nielsen.rays import Ray, rays_common_tail
from train_track_builder.nielsen.splitting import SplittingContext, complete_split
from train_track_builder.toprep.toprep import TopRep


class FixedPointKind:
    """Constants for the outcome of a fixed point search."""

    FIXED = "fixed"
    NIELSEN = "nielsen"  # empty fixed set, generator is a Nielsen path
    RAY = "ray"  # empty fixed set, generator pushes towards one attractor


@dataclass
class FixedPointResult:
    kind: str
    vertex: Word | None = None
    generator: Word = ()
    steps: int = 0
    eigenray_edge: int | None = None
    ray: Ray | None = field(default=None, repr=False)
    at: Word = ()  # cover vertex where the walk stopped

    @property
    def is_fixed(self) -> bool:
        return self.kind == FixedPointKind.FIXED

    def to_json(self, f: TopRep) -> dict:
        out: dict = {"kind": self.kind, "steps": self.steps}
        if self.vertex is not None:
            out["vertex"] = f.format(self.vertex)
        if self.generator:
            out["generator"] = f.format(self.generator)
        if self.eigenray_edge is not None:
            out["eigenray"] = f.graph.name(self.eigenray_edge)
        return out


def _stopping(f: TopRep, sigma: Word, context: SplittingContext | None) -> bool:
    image = f.map_path(sigma)
    if not image or reduce_word(sigma + image) != sigma + image:
        return False
    return context is None or complete_split(f, sigma, context) is not None


def eigenray_edges(f: TopRep) -> list[int]:
    """Oriented edges at fixed vertices with ``f(E) = E·u`` and ``u`` nontrivial."""
    fixed = set(f.fixed_vertices())
    out = []
    for e in f.graph.oriented_edges():
        img = f.image(e)
        if f.graph.init(e) in fixed and len(img) > 1 and img[0] == e:
            out.append(e)
    return out


def _match_eigenray(f: TopRep, ray: Ray, config: Config) -> int | None:
    for e in eigenray_edges(f):
        try:
            other = Ray.eigenray(f, e)
        except (DegenerateRayError, StructuralError):
            continue
        if rays_common_tail(f, ray, other, config) is not None:
            return e
    return None


def find_fixed_point(
    f: TopRep,
    lift: Lift,
    config: Config | None = None,
    check_radius: int = 0,
    start: Word = (),
) -> FixedPointResult:
    """Walk from the base along preferred edges until a fixed vertex or a stopping path appears.

    The preferred edge at a cover vertex is the first edge of the path to its
    image. The earliest stopping index is used: the first displacement that
    is completely split and does not cancel with its own image. With
    ``check_radius`` the verdict is compared against a brute-force search of
    the cover ball of that radius. ``start`` is the cover vertex the walk
    begins at, given by a path from the base.
    """
    if lift.f is not f:
        raise LiftError("lift belongs to another representative")
    cfg = config or get_config()
    log = get_logger()
    context = SplittingContext(f, cfg) if f.filtration is not None else None
    p: Word = reduce_word(start)
    if p:
        f.graph.check_path(p)
        if f.graph.init(p[0]) != f.graph.base:
            raise LiftError("walk must start at a lift of a vertex reached from the base")
    seen = {p}
    result = None
    for step in range(cfg.FIXED_POINT_MAX_STEPS):
        sigma = lift.displacement(p)
        if not sigma:
            result = FixedPointResult(FixedPointKind.FIXED, vertex=p, steps=step)
            break
        if _stopping(f, sigma, context):
            if f.map_path(sigma) == sigma:
                result = FixedPointResult(FixedPointKind.NIELSEN, generator=sigma, steps=step, at=p)
            else:
                ray = Ray(f, sigma)
                edge = _match_eigenray(f, ray, cfg)
                result = FixedPointResult(
                    FixedPointKind.RAY, generator=sigma, steps=step, eigenray_edge=edge, ray=ray, at=p
                )
            break
        p = reduce_word(p + sigma[:1])
        if p in seen:
            raise BudgetExceededError("preferred edge walk revisits a vertex", partial=p)
        seen.add(p)
    if result is None:
        raise BudgetExceededError(f"no verdict within {cfg.FIXED_POINT_MAX_STEPS} steps", partial=p)

    if check_radius and not result.is_fixed:
        found = lift.ball(check_radius).fixed_vertices()
        if found:
            log.warning(f"walk missed fixed vertex {f.format(found[0])}; using the ball search")
            result = FixedPointResult(FixedPointKind.FIXED, vertex=found[0], steps=result.steps)
    log.debug(f"fixed point search: {result.kind} after {result.steps} steps")
    return result
