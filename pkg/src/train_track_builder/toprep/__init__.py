from .moves import collapse_forest, fold_turn, reorient, slide, subdivide, subdivide_at_fixed_point
from .normalize import NormalizationNotes, normalize_representative
from .perron import PFValue, characteristic_polynomial, pf_eigenvalue, pf_eigenvector
from .rtt import LedgerEntry, RTTCheck, RTTLedger, check_rtt, realize_system, rtt, rtt_from
from .toprep import Filtration, Stratum, StratumKind, TopRep, classify_stratum, refine_filtration, transition_matrices

__all__ = [
    "Filtration",
    "LedgerEntry",
    "NormalizationNotes",
    "PFValue",
    "RTTCheck",
    "RTTLedger",
    "Stratum",
    "StratumKind",
    "TopRep",
    "characteristic_polynomial",
    "check_rtt",
    "classify_stratum",
    "collapse_forest",
    "fold_turn",
    "normalize_representative",
    "pf_eigenvalue",
    "pf_eigenvector",
    "realize_system",
    "refine_filtration",
    "reorient",
    "rtt",
    "rtt_from",
    "slide",
    "subdivide",
    "subdivide_at_fixed_point",
    "transition_matrices",
]
