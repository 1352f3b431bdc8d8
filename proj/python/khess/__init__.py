"""Radial k-Hessian solutions on space forms, symmetric-function machinery and
integral-identity checks, backed by the C++ core."""

from ._khess import (
    DomainError,
    IdentityReport,
    ParameterError,
    PreconditionError,
    ProblemParams,
    RadialSolution,
    ShootingError,
    SpaceForm,
    conformal_factor,
    explicit_solution,
    garding_cone,
    negative_control,
    perturbed,
    potential,
    quotient_derivative,
    reference_matrix,
    rescale_to_quotient,
    run_property_suite,
    shoot_radius,
    shot_solution,
    sigma_k,
    sigma_k_grad,
    sigma_k_matrix,
    sphere_area,
    verify_identity,
    warping,
)

INTEGRAL_IDENTITIES = ("L6_1", "L6_2_i", "L6_2_ii", "L6_3")

__all__ = [name for name in dir() if not name.startswith("_")]
