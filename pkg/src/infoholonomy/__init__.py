"""
Numerical information geometry and holonomy of exponential families.

The package computes Fisher metrics, alpha-connections and curvature of
exponential families from exact Taylor-mode derivatives of the potential,
runs geometric property checks, and assembles holonomy evidence (curvature
algebras, parallel transport, Berger's list) into a classification.
"""

__version__ = "0.1.0"

from .checks import (
    PropertyReport,
    block_diagonal_partition,
    constant_curvature,
    curvature_sign_profile,
    is_einstein,
    is_flat,
)
from .deriv import DerivativeStack, Domain, ScalarField, evaluate_stack, finite_difference_stack
from .errors import *  # noqa: F401,F403
from .holonomy import (
    EvidenceFlags,
    HolonomyCandidate,
    HolonomyVerdict,
    TransportResult,
    berger_candidates,
    classify,
    curvature_algebra_dimension,
    loop_curvature_consistency,
    parallel_transport_loop,
)
from .models import (
    ExponentialFamilyModel,
    MeanCovariancePoint,
    get_model,
    log_density,
    meancov_from_natural,
    model_names,
    natural_from_meancov,
    normal_model,
    sample,
)
from .tensors import (
    CurvatureBundle,
    alpha_connection,
    curvature_bundle,
    fisher_metric,
    fisher_metric_mc,
    levi_civita,
    ricci_tensor,
    riemann_tensor,
    scalar_curvature,
    sectional_matrix,
    skewness_tensor,
    skewness_tensor_mc,
)
