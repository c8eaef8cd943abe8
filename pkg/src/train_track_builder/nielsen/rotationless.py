"""Rotationless powers of outer automorphisms."""

import math
from dataclasses import dataclass, field

from train_track_builder.core.config import Config, get_config
from train_track_builder.core.exceptions import BudgetExceededError
from train_track_builder.core.logger import get_logger
from train_track_builder.graphs.automorphism import Automorphism
from train_track_builder.nielsen.constants import improved_kn_bound, kn_bound
from train_track_builder.nielsen.principal import inp_endpoints
from train_track_builder.toprep.rtt import rtt
from train_track_builder.toprep.toprep import TopRep, refine_filtration


@dataclass
class RotationlessCertificate:
    exponent: int
    rank: int
    vertex_periods: dict[str, int] = field(default_factory=dict)
    direction_periods: dict[str, int] = field(default_factory=dict)
    tried: list[int] = field(default_factory=list)

    @property
    def kn_bound(self) -> int:
        return kn_bound(self.rank)

    @property
    def improved_kn_bound(self) -> int:
        return improved_kn_bound(self.rank)

    def to_json(self) -> dict:
        return {
            "exponent": self.exponent,
            "vertex_periods": self.vertex_periods,
            "direction_periods": self.direction_periods,
            "tried": self.tried,
            "K_n": str(self.kn_bound),
            "K_n_improved": str(self.improved_kn_bound),
        }


def vertex_period(f: TopRep, v: int) -> int | None:
    w = v
    for k in range(1, f.graph.num_vertices + 1):
        w = f.vertex_map[w]
        if w == v:
            return k
    return None


def direction_period(f: TopRep, d: int) -> int | None:
    x: int | None = d
    for k in range(1, 2 * f.graph.num_edges + 1):
        x = f.df(x) if x is not None else None
        if x is None:
            return None
        if x == d:
            return k
    return None


def _principal_periodic(f: TopRep, v: int, inp_vertices: set[int]) -> bool:
    directions = [d for d in f.graph.star(v) if direction_period(f, d) is not None]
    if len(directions) != 2 or v in inp_vertices or f.filtration is None:
        return True
    h1, h2 = (f.filtration.height(d) for d in directions)
    return not (h1 == h2 and f.filtration[h1].is_eg)


def periodic_data(f: TopRep, config: Config | None = None) -> tuple[dict[int, int], dict[int, int]]:
    """Periods of principal periodic vertices and of periodic directions at them.

    Principality is judged with the period-one iNps of ``f``.
    """
    inp_vertices = {v for pair in inp_endpoints(f, config) for v in pair}
    vertices: dict[int, int] = {}
    directions: dict[int, int] = {}
    for v in range(f.graph.num_vertices):
        period = vertex_period(f, v)
        if period is None or not _principal_periodic(f, v, inp_vertices):
            continue
        vertices[v] = period
        for d in f.graph.star(v):
            p = direction_period(f, d)
            if p is not None:
                directions[d] = p
    return vertices, directions


def is_rotationless(f: TopRep, config: Config | None = None) -> bool:
    """Every principal periodic vertex and every periodic direction at one is fixed."""
    if f.filtration is None:
        f = refine_filtration(f)
    vertices, directions = periodic_data(f, config)
    return all(p == 1 for p in vertices.values()) and all(p == 1 for p in directions.values())


def rotationless_power(
    phi: Automorphism, config: Config | None = None, f: TopRep | None = None
) -> tuple[int, RotationlessCertificate]:
    """Least exponent found with ``phi^k`` rotationless, with the ``K_n`` certificate.

    The candidate is the lcm of the periods seen on a relative train track for
    ``phi``; its multiples are tried until the iterate passes the check.
    """
    cfg = config or get_config()
    log = get_logger()
    f = f or rtt(phi, config=cfg)
    vertices, directions = periodic_data(f, cfg)
    base = math.lcm(*vertices.values(), *directions.values()) if vertices or directions else 1
    names = f.graph.vertex_names
    cert = RotationlessCertificate(
        exponent=base,
        rank=phi.rank,
        vertex_periods={names[v]: p for v, p in vertices.items()},
        direction_periods={f.graph.name(d): p for d, p in directions.items()},
    )
    k = base
    while k <= cfg.ROTATIONLESS_MAX_EXPONENT:
        cert.tried.append(k)
        if k == 1 or is_rotationless(f.power(k), cfg):
            cert.exponent = k
            log.debug(f"rotationless exponent {k} (tried {cert.tried})")
            return k, cert
        k += base
    raise BudgetExceededError(f"no rotationless power up to {cfg.ROTATIONLESS_MAX_EXPONENT}", partial=cert)
