"""Free factor systems: carrying, meets, Whitehead support and invariant systems."""

from train_track_builder.ffs.invariant import invariant_ffs_between, largest_invariant_below
from train_track_builder.ffs.system import FreeFactorSystem, apply_automorphism, carries, is_invariant, meet
from train_track_builder.ffs.whitehead import minimal_support, whitehead_minimize

__all__ = [
    "FreeFactorSystem",
    "apply_automorphism",
    "carries",
    "invariant_ffs_between",
    "is_invariant",
    "largest_invariant_below",
    "meet",
    "minimal_support",
    "whitehead_minimize",
]
