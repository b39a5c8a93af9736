"""Computations for k-cube groups, their k-rank graphs and K-theory."""

__version__ = "0.1.0"

from .groups import AbelianGroup, parse_group
from .presentation import Presentation, load_presentation, make_free_product, verify_vh_axioms
from .cubes import check_c3, enumerate_cubes
from .rank_graph import adjacency_matrices, validate_k_graph
from .snf import smith_normal_form
from .modular import smith_normal_form_modular
from .homology import build_chain_complex, homology_groups
from .ktheory import identity_order_bounds, ktheory_report
from .fixtures import load_builtin

__all__ = [
    "AbelianGroup",
    "Presentation",
    "adjacency_matrices",
    "build_chain_complex",
    "check_c3",
    "enumerate_cubes",
    "homology_groups",
    "identity_order_bounds",
    "ktheory_report",
    "load_builtin",
    "load_presentation",
    "make_free_product",
    "parse_group",
    "smith_normal_form",
    "smith_normal_form_modular",
    "validate_k_graph",
    "verify_vh_axioms",
]
