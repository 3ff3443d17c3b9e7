"""Lattice path matroids, negative correlation, and transposition walks on Dyck paths."""

__version__ = "0.1.0"

from .paths import (
    LatticePath,
    dominates,
    enumerate_between,
    heights,
    is_dyck,
    narayana_statistic,
    path_from_up_set,
    up_step_indices,
)
from .counting import StepConstraints, catalan, count_between, narayana, sample_between
from .matroid import (
    LatticePathMatroid,
    MinorSpec,
    catalan_matroid,
    check_balanced,
    dual,
    is_negatively_correlated,
    make_lpm,
    minor_pair_counts,
    transversal_system,
    verify_exchange_axiom,
)
from .injection import classify_and_apply, invert, verify_injection
from .chains import (
    ChainKernel,
    basis_exchange,
    bernoulli_laplace,
    dyck_adjacent_transposition,
    dyck_random_transposition,
    simulate,
    transition_matrix,
)
from .analysis import (
    certify_upper_bound,
    dirichlet_form,
    exact_mixing_time,
    log_sobolev_entropy,
    scaling_experiment,
    spectral_gap,
    variance,
)
