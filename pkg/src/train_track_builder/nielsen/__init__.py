"""Nielsen paths, splittings, rays, lifts and fixed points of relative train track maps."""

from train_track_builder.nielsen.constants import Constants, bcc, constants, critical_constant, kn_bound, landau
from train_track_builder.nielsen.fixed_point import FixedPointKind, FixedPointResult, find_fixed_point
from train_track_builder.nielsen.inps import find_eg_inps, illegal_turns
from train_track_builder.nielsen.lifts import Lift
from train_track_builder.nielsen.principal import (
    NielsenClass,
    nielsen_connections,
    nielsen_path,
    principal_set,
    principal_vertices,
)
from train_track_builder.nielsen.rays import Ray, rays_common_tail
from train_track_builder.nielsen.rotationless import RotationlessCertificate, is_rotationless, rotationless_power
from train_track_builder.nielsen.splitting import CompleteSplitting, Piece, PieceKind, SplittingContext, complete_split

__all__ = [
    "CompleteSplitting",
    "Constants",
    "FixedPointKind",
    "FixedPointResult",
    "Lift",
    "NielsenClass",
    "Piece",
    "PieceKind",
    "Ray",
    "RotationlessCertificate",
    "SplittingContext",
    "bcc",
    "complete_split",
    "constants",
    "critical_constant",
    "find_eg_inps",
    "find_fixed_point",
    "illegal_turns",
    "is_rotationless",
    "kn_bound",
    "landau",
    "nielsen_connections",
    "nielsen_path",
    "principal_set",
    "principal_vertices",
    "rays_common_tail",
    "rotationless_power",
]
