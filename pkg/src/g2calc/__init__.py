"""Exact exterior calculus over polynomial charts, specialized to G2-structures.

The symbolic layer works over exact rationals: polynomials, differential
forms, vector fields and polynomial maps, with the G2 and symplectic
machinery built on top. ``g2calc.numeric`` holds the floating-point
cross-checks and ``g2calc.cli`` the command-line front end.
"""

from .algebra import Polynomial, poly_add, poly_compose, poly_eval, poly_mul, poly_partial
from .errors import (
    DegreeError,
    DimensionMismatch,
    G2CalcError,
    IdentityViolation,
    InverseError,
    LimitError,
    MetricError,
    NondegeneracyError,
    NotClosed,
    NotRochesterian,
    UnsupportedStructure,
)
from .exterior import (
    DifferentialForm,
    PolynomialMap,
    VectorField,
    d,
    exterior_derivative,
    form_apply,
    interior_product,
    is_top_degree,
    lie_derivative,
    poincare_primitive,
    pullback,
    pushforward_inverse,
    vector_bracket,
    wedge,
)
from .g2 import (
    G2Structure,
    bracket_pullback_check,
    cross_product,
    flow_constancy_check,
    graph_criterion,
    hodge_star,
    integer_rotation,
    is_g2_morphism,
    is_g2_vector_field,
    is_rochesterian,
    jacobi_defect,
    metric_from_phi,
    preset_cst,
    preset_phi0,
    preset_star_phi0,
    rochesterian_bracket,
    rochesterian_field_of,
    rotation_generator,
    split_two_form,
)
from .presets import get_preset
from .symplectic import (
    SymplecticStructure,
    hamiltonian_field,
    poisson_bracket,
    poisson_jacobi_check,
    preset_omega_std,
    symplectomorphism_bracket_check,
)

__version__ = "0.1.0"
