"""Standard symplectic structure, Hamiltonian fields and the Poisson bracket.

Hamiltonian fields are solved with the same contraction solver the G2
module uses for Rochesterian fields: X _| omega = dH here, X _| phi = d alpha
there.
"""

from dataclasses import dataclass, field

from . import linalg
from .algebra import Polynomial
from .errors import DegreeError, IdentityViolation, InverseError, NondegeneracyError
from .exterior import (
    DifferentialForm,
    contraction_matrix,
    exterior_derivative,
    form_apply,
    interior_product,
    is_top_degree,
    pullback,
    solve_contraction,
    vector_bracket,
)


@dataclass(frozen=True)
class SymplecticStructure:
    """A closed nondegenerate 2-form with constant coefficients on 2n variables."""

    omega: DifferentialForm
    n: int = field(init=False)

    def __post_init__(self):
        om = self.omega
        if om.degree != 2 or om.dim % 2:
            raise DegreeError("a symplectic form is a 2-form on an even-dimensional chart")
        if not om.is_constant():
            raise NondegeneracyError("only constant-coefficient symplectic forms are supported")
        if not is_top_degree(om) and not exterior_derivative(om).is_zero():
            raise NondegeneracyError("symplectic form must be closed")
        if linalg.rank(coefficient_matrix(om)) != om.dim:
            raise NondegeneracyError("symplectic form is degenerate")
        object.__setattr__(self, "n", om.dim // 2)

    @property
    def dim(self):
        return self.omega.dim


def coefficient_matrix(omega):
    """Antisymmetric W with omega = sum_{i<j} W_ij dx^i ^ dx^j."""
    _, mat = contraction_matrix(omega)
    # rows of the contraction matrix are the 1-indices (j,), columns e_i: entry W_ij
    return linalg.transpose(mat)


def preset_omega_std(n):
    """sum_i dx^i ^ dx^{n+i} on x1..x2n."""
    if n < 1:
        raise ValueError("half-dimension must be >= 1")
    terms = {(i, n + i): 1 for i in range(1, n + 1)}
    return SymplecticStructure(DifferentialForm(2 * n, 2, terms))


def hamiltonian_field(s, H):
    """The unique X_H with X_H _| omega = dH."""
    if H.dim != s.dim:
        raise DegreeError(f"Hamiltonian lives on {H.dim} variables, structure on {s.dim}")
    dH = exterior_derivative(DifferentialForm.function(H))
    X, residual = solve_contraction(s.omega, dH)
    if not residual.is_zero():
        raise IdentityViolation("contraction into a symplectic form failed to be surjective")
    return X


def poisson_bracket(s, f, g):
    """{f, g} = omega(X_f, X_g)."""
    return form_apply(s.omega, [hamiltonian_field(s, f), hamiltonian_field(s, g)])


def poisson_jacobi_check(s, f, g, h):
    """{f,{g,h}} + {g,{h,f}} + {h,{f,g}}; identically zero."""
    pb = lambda a, b: poisson_bracket(s, a, b)  # noqa: E731
    return pb(f, pb(g, h)) + pb(g, pb(h, f)) + pb(h, pb(f, g))


def is_symplectic_field(s, X):
    """L_X omega = d(X _| omega) = 0 (omega closed)."""
    return exterior_derivative(interior_product(X, s.omega)).is_zero()


def is_symplectomorphism(s_src, s_dst, mapping):
    return pullback(mapping, s_dst.omega) == s_src.omega


@dataclass(frozen=True)
class SymplecticBracketReport:
    lhs: Polynomial
    rhs: Polynomial

    @property
    def equal(self):
        return self.lhs == self.rhs

    @property
    def difference(self):
        return self.lhs - self.rhs


def symplectomorphism_bracket_check(s_src, s_dst, mapping, f, g):
    """{f, g} o psi against {f o psi, g o psi}."""
    if mapping.inverse is None:
        raise InverseError("map carries no certified inverse")
    comps = mapping.components
    lhs = poisson_bracket(s_dst, f, g).compose(comps)
    rhs = poisson_bracket(s_src, f.compose(comps), g.compose(comps))
    return SymplecticBracketReport(lhs, rhs)


def bracket_hamiltonian(s, X1, X2):
    """omega(X2, X1): the Hamiltonian generating [X1, X2] for symplectic X1, X2."""
    return form_apply(s.omega, [X2, X1])


def bracket_is_hamiltonian(s, X1, X2):
    """[X1, X2] _| omega == d(omega(X2, X1)) exactly."""
    lhs = interior_product(vector_bracket(X1, X2), s.omega)
    rhs = exterior_derivative(DifferentialForm.function(bracket_hamiltonian(s, X1, X2)))
    return lhs == rhs
