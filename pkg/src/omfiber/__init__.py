"""Combinatorial Milnor fibration of an oriented matroid."""
from .arrangement import Arrangement, from_arrangement
from .homology import HomologyReport, homology, os_betti, relative_homology
from .milnor import check_quasi_fibration, fibration, milnor_fiber, milnor_report, proof_matching
from .pipeline import Pipeline, load_oriented_matroid
from .poset import Poset, PosetMap
from .salvetti import salvetti_poset
from .signs import OrientedMatroid, from_covectors, simplify, validate_axioms
from .subdivision import rank_subdivide_dual, rank_subdivide_salvetti, verify_subdivision

__all__ = [
    "Arrangement",
    "HomologyReport",
    "OrientedMatroid",
    "Pipeline",
    "Poset",
    "PosetMap",
    "check_quasi_fibration",
    "fibration",
    "from_arrangement",
    "from_covectors",
    "homology",
    "load_oriented_matroid",
    "milnor_fiber",
    "milnor_report",
    "os_betti",
    "proof_matching",
    "rank_subdivide_dual",
    "rank_subdivide_salvetti",
    "relative_homology",
    "salvetti_poset",
    "simplify",
    "validate_axioms",
    "verify_subdivision",
]
