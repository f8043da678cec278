"""folnerlab: Folner sets, windowed densities, quasitilings and block entropy."""

from .errors import CapacityError, DomainError
from .groups import (
    FiniteSubset,
    GroupSpec,
    group_op,
    parse_group,
    set_inverse,
    set_product,
    translate,
)
from .folner import FolnerFamily, find_invariant_index, folner_set, invariance_defect
from .density import (
    Window,
    check_boundary_lemma,
    check_core_lemma,
    check_large_core,
    e_core,
    interior,
    lower_density_over_window,
)
from .quasitiling import (
    Quasitiling,
    absorb_lower_tiles,
    addable_centers,
    disjointify,
    eps_disjoint_check,
    greedy_construct,
    maximal_marker_set,
)
from .symbolic import (
    Alphabet,
    Configuration,
    Distribution,
    Pattern,
    bernoulli_entropy_exact,
    conditional_entropy,
    empirical_entropy_rate,
    pattern_frequency,
    shannon_entropy,
    verify_frequency_lemma,
)

__version__ = "0.1.0"

__all__ = [
    "Alphabet",
    "CapacityError",
    "Configuration",
    "Distribution",
    "DomainError",
    "FiniteSubset",
    "FolnerFamily",
    "GroupSpec",
    "Pattern",
    "Quasitiling",
    "Window",
    "absorb_lower_tiles",
    "addable_centers",
    "bernoulli_entropy_exact",
    "check_boundary_lemma",
    "check_core_lemma",
    "check_large_core",
    "conditional_entropy",
    "disjointify",
    "e_core",
    "empirical_entropy_rate",
    "eps_disjoint_check",
    "find_invariant_index",
    "folner_set",
    "greedy_construct",
    "group_op",
    "interior",
    "invariance_defect",
    "lower_density_over_window",
    "maximal_marker_set",
    "parse_group",
    "pattern_frequency",
    "set_inverse",
    "set_product",
    "shannon_entropy",
    "translate",
    "verify_frequency_lemma",
]
