"""Absolute stability of discrete-time switched linear systems ``x(n) = A(n) x(n-1)``."""

__version__ = "0.1.0"

from .linalg import NotConvergedError, mat_mul, operator_norm, perron_root, spectral_radius  # noqa: E402
from .products import (  # noqa: E402
    BACKEND,
    BoundsReport,
    BudgetExceededError,
    MatrixClass,
    Verdict,
    evaluate_trajectory,
    realize_word,
    regularity_index,
    stability_bounds,
)
from .norms import NormApprox, build_norm, evaluate_norm, verify_contraction  # noqa: E402
from .families import (  # noqa: E402
    family_class,
    growth_factor,
    periodic_word,
    make_family_point,
    make_P,
    make_R,
    stable_parameter,
    unstable_parameter,
)
from .criteria import MixClassSpec, MixParams2, cross_validate, r2_criterion, rplus_criterion  # noqa: E402
