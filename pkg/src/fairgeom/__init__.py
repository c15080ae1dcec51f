"""Equalized-odds representation design via chi-square perturbation geometry."""
from .errors import EpsilonOutOfRange, FairGeomError
from .geometry import (
    EpsilonBounds,
    PerturbationSet,
    SingularTriple,
    WMatrices,
    approx_mi_ty,
    approx_mi_xy,
    compute_epsilon_bounds,
    compute_w_matrices,
    singular_triples,
    validate_perturbation,
)
from .kernels import BACKEND as KERNEL_BACKEND
from .oracle import OracleQuery, OracleResult, enumerate_geometric, grid_search_chi2, grid_search_eo
from .prob_core import (
    JointSTXY,
    PriorInstance,
    bayes_invert,
    build_joint,
    chi_square_pointwise,
    conditional_mutual_information,
    kl_divergence,
    mutual_information,
    validate_prior,
)
from .solver import (
    DesignResult,
    compute_k,
    design_bound,
    evaluate_quadratic_objective,
    markov_consistency_check,
    select_direction,
    solve,
)

__version__ = "0.1.0"
