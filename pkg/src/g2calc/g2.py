"""G2-structures on polynomial charts: presets, metric recovery, cross
product, Hodge star, the 7 + 14 splitting of 2-forms, Rochesterian forms
and fields, the phi-bracket with its Jacobi defect, and morphism tests.
"""

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

import numpy as np

from . import linalg
from .algebra import Polynomial
from .errors import (
    DegreeError,
    IdentityViolation,
    MetricError,
    NondegeneracyError,
    NotRochesterian,
    UnsupportedStructure,
)
from .exterior import (
    DifferentialForm,
    PolynomialMap,
    VectorField,
    canonical_index,
    contraction_matrix,
    exterior_derivative,
    form_apply,
    interior_product,
    lie_derivative,
    pullback,
    solve_contraction,
    vector_bracket,
    wedge,
)

PHI0_TERMS = {
    (1, 2, 3): 1, (1, 4, 5): 1, (1, 6, 7): 1, (2, 4, 6): 1,
    (2, 5, 7): -1, (3, 4, 7): -1, (3, 5, 6): -1,
}
STAR_PHI0_TERMS = {
    (4, 5, 6, 7): 1, (2, 3, 6, 7): 1, (2, 3, 4, 5): 1, (1, 3, 5, 7): 1,
    (1, 3, 4, 6): -1, (1, 2, 5, 6): -1, (1, 2, 4, 7): -1,
}

CLOSED_MANIFOLD_NOTE = (
    "On a closed (compact, boundaryless) 7-manifold with closed G2-structure the "
    "only Rochesterian vector field is zero: X _| phi = d(alpha) forces "
    "6|X|^2 vol = d(alpha ^ d(alpha) ^ phi), whose integral vanishes by Stokes. "
    "Polynomial coordinate charts are never closed manifolds, so this statement has "
    "no finite instance here and is documented rather than tested "
    "(see docs/closed-manifolds.md)."
)


def _sample_points(dim, count, seed=0):
    rng = random.Random(seed)
    return [[Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(dim)] for _ in range(count)]


def _contraction_rank_at(phi, point):
    n = phi.dim
    rows = {r: i for i, r in enumerate(combinations(range(1, n + 1), phi.degree - 1))}
    mat = [[Fraction(0)] * n for _ in rows]
    for i in range(1, n + 1):
        contracted = interior_product(VectorField.coordinate(n, i), phi)
        for idx, c in contracted.terms.items():
            mat[rows[idx]][i - 1] = c.evaluate(point)
    return linalg.rank(mat)


@dataclass(frozen=True)
class G2Structure:
    """A 3-form on a 7-dimensional chart (14 for product charts) with injective contraction."""

    phi: DifferentialForm
    name: str = "custom"
    is_closed: bool = field(init=False)
    constant_coefficients: bool = field(init=False)

    def __post_init__(self):
        phi = self.phi
        if phi.degree != 3:
            raise DegreeError(f"a G2-structure is a 3-form, got degree {phi.degree}")
        if phi.dim not in (7, 14):
            raise UnsupportedStructure(f"G2-structures live on 7 (or 14 for products) dims, got {phi.dim}")
        constant = phi.is_constant()
        points = [[0] * phi.dim] + ([] if constant else _sample_points(phi.dim, 5))
        for p in points:
            if _contraction_rank_at(phi, p) != phi.dim:
                raise NondegeneracyError(f"X -> X _| phi is not injective at {p}")
        object.__setattr__(self, "constant_coefficients", constant)
        object.__setattr__(self, "is_closed", exterior_derivative(phi).is_zero())

    @property
    def chart_dim(self):
        return self.phi.dim

    def require_closed(self):
        if not self.is_closed:
            raise UnsupportedStructure(f"structure {self.name!r} is not closed")

    def require_constant(self):
        if not self.constant_coefficients:
            raise UnsupportedStructure(f"structure {self.name!r} has non-constant coefficients")


def phi0_form():
    return DifferentialForm(7, 3, PHI0_TERMS)


def preset_phi0():
    return G2Structure(phi0_form(), name="phi0")


def preset_star_phi0():
    return DifferentialForm(7, 4, STAR_PHI0_TERMS)


def cst_form():
    """Re(dz1 dz2 dz3) + omega ^ dt on (x1, x2, x3, y1, y2, y3, t).

    omega = sum dy_i ^ dx_i, the exterior derivative of the tautological
    form sum y_i dx_i; with this sign the form is positive for the
    coordinate orientation.
    """
    B = DifferentialForm.basis
    re_omega = B(7, (1, 2, 3)) - B(7, (1, 5, 6)) - B(7, (4, 2, 6)) - B(7, (4, 5, 3))
    omega = B(7, (4, 1)) + B(7, (5, 2)) + B(7, (6, 3))
    return re_omega + wedge(omega, B(7, (7,)))


def preset_cst():
    return G2Structure(cst_form(), name="cst")


def tautological_form():
    """sum y_i dx_i on the cst chart (y_i = coordinate i + 3)."""
    terms = {(i,): Polynomial.variable(7, i + 3) for i in (1, 2, 3)}
    return DifferentialForm(7, 1, terms)


# --- metric ---------------------------------------------------------------

@lru_cache(maxsize=32)
def _bilinear_polys(phi):
    """B_ij = top coefficient of (e_i _| phi) ^ (e_j _| phi) ^ phi, as polynomials."""
    n = phi.dim
    top = tuple(range(1, n + 1))
    contractions = [interior_product(VectorField.coordinate(n, i), phi) for i in range(1, n + 1)]
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            c = wedge(contractions[i], contractions[j], phi).coefficient(top)
            out[i][j] = out[j][i] = c
    return out


def _iroot(m, k):
    """Largest integer r with r**k <= m (Newton iteration on integers)."""
    if m < 2:
        return m
    r = 1 << ((m.bit_length() + k - 1) // k)
    while True:
        nxt = ((k - 1) * r + m // r ** (k - 1)) // k
        if nxt >= r:
            return r
        r = nxt


def _exact_root(value, k):
    """The rational k-th root of a positive Fraction, or None."""
    num, den = _iroot(value.numerator, k), _iroot(value.denominator, k)
    if num ** k != value.numerator or den ** k != value.denominator:
        return None
    return Fraction(num, den)


def _is_exact_point(point):
    return all(isinstance(v, (int, Fraction)) and not isinstance(v, bool) for v in point)


@dataclass(frozen=True)
class MetricReport:
    gram_matrix: list
    volume_form_coefficient: object
    pointwise_at: tuple
    exact: bool

    def as_array(self):
        return np.array([[float(v) for v in row] for row in self.gram_matrix])


def metric_from_phi(g2, point=None):
    """Metric and volume coefficient induced by phi at a point.

    With B_ij the top coefficient of (e_i _| phi)^(e_j _| phi)^phi one has
    B = 6 sqrt(det g) g, so det g = (det B / 6^7)^(2/9). When the point is
    rational and det B / 6^7 is a rational ninth power the result is exact.
    """
    if g2.chart_dim != 7:
        raise UnsupportedStructure("metric recovery is defined on 7-dimensional charts")
    point = tuple([0] * 7 if point is None else point)
    if len(point) != 7:
        raise MetricError(f"point must have 7 coordinates, got {len(point)}")
    polys = _bilinear_polys(g2.phi)
    exact = _is_exact_point(point)
    if exact:
        bmat = [[p.evaluate(point) for p in row] for row in polys]
        det_b = linalg.det(bmat)
        if det_b <= 0:
            raise MetricError(f"det B = {det_b} <= 0: not positively oriented at {point}")
        s = _exact_root(det_b / 6 ** 7, 9)
        if s is not None:
            gram = [[v / (6 * s) for v in row] for row in bmat]
            _check_positive(gram)
            return MetricReport(gram, s, point, True)
        bmat = [[float(v) for v in row] for row in bmat]
    else:
        bmat = [[p.evaluate(point) for p in row] for row in polys]
    arr = np.array(bmat, dtype=float)
    det_b = float(np.linalg.det(arr))
    if det_b <= 0:
        raise MetricError(f"det B = {det_b} <= 0: not positively oriented at {point}")
    det_g = (det_b / 6.0 ** 7) ** (2.0 / 9.0)
    vol = math.sqrt(det_g)
    gram = (arr / (6.0 * vol)).tolist()
    _check_positive(gram)
    return MetricReport(gram, vol, point, False)


def _check_positive(gram):
    n = len(gram)
    for k in range(1, n + 1):
        sub = [row[:k] for row in gram[:k]]
        minor = linalg.det(sub) if isinstance(gram[0][0], Fraction) else float(np.linalg.det(np.array(sub)))
        if minor <= 0:
            raise MetricError(f"recovered metric is not positive definite (minor {k} = {minor})")


# --- cross product and Hodge star ------------------------------------------

def _field_values(X, point):
    if isinstance(X, VectorField):
        return X.evaluate(point)
    return list(X)


def cross_product(g2, X, Y, point=None):
    """X x Y at a point: solves g (X x Y) = [phi(X, Y, e_k)]_k."""
    report = metric_from_phi(g2, point)
    p = report.pointwise_at
    x, y = _field_values(X, p), _field_values(Y, p)
    coeffs = g2.phi.evaluate(p)
    n = 7
    rhs = []
    for k in range(1, n + 1):
        total = 0
        for idx, c in coeffs.items():
            if k not in idx:
                continue
            # phi(X, Y, e_k) restricted to this basis term
            others = [i for i in idx if i != k]
            sign, _ = canonical_index(others + [k])
            a, b = others
            total += sign * c * (x[a - 1] * y[b - 1] - x[b - 1] * y[a - 1])
        rhs.append(total)
    if report.exact and all(isinstance(v, (int, Fraction)) for v in rhs):
        return linalg.matvec(linalg.inverse(report.gram_matrix), rhs)
    return np.linalg.solve(report.as_array(), np.array(rhs, dtype=float)).tolist()


def cross_product_field(g2, X, Y):
    """X x Y as a polynomial field, for constant phi with an exact metric."""
    g2.require_constant()
    report = metric_from_phi(g2)
    if not report.exact:
        raise UnsupportedStructure("symbolic cross product needs an exactly recoverable metric")
    n = 7
    rhs = [form_apply(g2.phi, [X, Y, VectorField.coordinate(n, k)]) for k in range(1, n + 1)]
    ginv = linalg.inverse(report.gram_matrix)
    comps = []
    for row in ginv:
        total = Polynomial.zero(n)
        for c, r in zip(row, rhs):
            if c:
                total = total + r.scale(c)
        comps.append(total)
    return VectorField(comps, n)


def _star_coefficients(coeffs, degree, ginv, vol, zero):
    """Hodge star on constant coefficient data {multi-index: value}."""
    n = len(ginv)
    all_idx = list(range(1, n + 1))
    identity = all(ginv[i][j] == (1 if i == j else 0) for i in range(n) for j in range(n))
    raised = {}
    if identity:
        raised = dict(coeffs)
    else:
        for K in combinations(all_idx, degree):
            total = zero
            for I, a in coeffs.items():
                sub = [[ginv[k - 1][i - 1] for i in I] for k in K]
                m = linalg.det(sub) if not isinstance(zero, float) else float(np.linalg.det(np.array(sub, dtype=float)))
                total = total + m * a
            raised[K] = total
    out = {}
    for K, a in raised.items():
        J = tuple(i for i in all_idx if i not in K)
        sign, _ = canonical_index(K + J)
        out[J] = out.get(J, zero) + a * (sign * vol)
    return out


def hodge_star(g2, a, point=None):
    """Hodge star of ``a`` for the metric and orientation induced by phi.

    With ``point=None`` the structure must have constant coefficients and an
    exactly recoverable metric; the star then acts on polynomial
    coefficients and returns a DifferentialForm. With a point, coefficients
    are evaluated there: the result is a constant DifferentialForm when the
    metric is exact, else a dict {multi-index: float}.
    """
    if a.dim != 7:
        raise UnsupportedStructure("Hodge star is implemented on the 7-dimensional chart")
    n = 7
    if point is None:
        g2.require_constant()
        report = metric_from_phi(g2)
        if not report.exact:
            raise UnsupportedStructure("symbolic Hodge star needs an exactly recoverable metric")
        ginv = linalg.inverse(report.gram_matrix)
        coeffs = _star_coefficients(a.terms, a.degree, ginv, report.volume_form_coefficient, Polynomial.zero(n))
        return DifferentialForm(n, n - a.degree, coeffs)
    report = metric_from_phi(g2, point)
    values = a.evaluate(report.pointwise_at)
    if report.exact and _is_exact_point(report.pointwise_at):
        ginv = linalg.inverse(report.gram_matrix)
        coeffs = _star_coefficients(values, a.degree, ginv, report.volume_form_coefficient, Fraction(0))
        return DifferentialForm(n, n - a.degree, coeffs)
    ginv = np.linalg.inv(report.as_array()).tolist()
    values = {k: float(v) for k, v in values.items()}
    return _star_coefficients(values, a.degree, ginv, float(report.volume_form_coefficient), 0.0)


# --- the 7 + 14 splitting ----------------------------------------------------

@dataclass(frozen=True)
class TwoFormSplit:
    omega7: DifferentialForm
    omega14: DifferentialForm
    witness_field: VectorField


@lru_cache(maxsize=16)
def _projection_data(phi):
    """Rows, contraction matrix A and the coefficient map L with c = L vec(a).

    The inner product on 2-forms uses B^{-1} in place of g^{-1}. The two
    differ by a positive constant factor, which cancels in an orthogonal
    projection, so everything stays rational.
    """
    rows, amat = contraction_matrix(phi)
    bmat = [[p.constant_term for p in row] for row in _bilinear_polys(phi)]
    ginv = linalg.inverse(bmat)
    m = [[ginv[i - 1][k - 1] * ginv[j - 1][l - 1] - ginv[i - 1][l - 1] * ginv[j - 1][k - 1]
          for (k, l) in rows] for (i, j) in rows]
    at_m = linalg.matmul(linalg.transpose(amat), m)
    gram7 = linalg.matmul(at_m, amat)
    left = linalg.matmul(linalg.inverse(gram7), at_m)
    return rows, amat, left, m


def split_two_form(g2, a):
    """Orthogonal split a = omega7 + omega14 with omega7 = witness _| phi."""
    g2.require_constant()
    if g2.chart_dim != 7:
        raise UnsupportedStructure("the 7 + 14 splitting is defined on 7-dimensional charts")
    if a.degree != 2 or a.dim != 7:
        raise DegreeError("split_two_form expects a 2-form on the 7-dimensional chart")
    rows, _, left, _ = _projection_data(g2.phi)
    n = 7
    comps = []
    for i in range(n):
        total = Polynomial.zero(n)
        for r, coeff in zip(rows, left[i]):
            if coeff:
                c = a.coefficient(r)
                if c:
                    total = total + c.scale(coeff)
        comps.append(total)
    witness = VectorField(comps, n)
    omega7 = interior_product(witness, g2.phi)
    return TwoFormSplit(omega7, a - omega7, witness)


def two_form_inner_product(g2, a, b):
    """Pointwise inner product of constant 2-forms, up to the positive factor of B."""
    rows, _, _, m = _projection_data(g2.phi)
    va = [a.coefficient(r).constant_term for r in rows]
    vb = [b.coefficient(r).constant_term for r in rows]
    return sum((x * y for x, y in zip(va, linalg.matvec(m, vb))), Fraction(0))


def omega7_rank(g2):
    """Dimension of span{e_i _| phi}."""
    return linalg.rank(contraction_matrix(g2.phi)[1])


def omega14_rank(g2):
    """Dimension of the orthogonal complement of span{e_i _| phi} among 2-forms."""
    rows, amat, _, m = _projection_data(g2.phi)
    constraints = linalg.transpose(linalg.matmul(m, amat))
    return len(linalg.nullspace(constraints))


# --- G2 and Rochesterian fields ----------------------------------------------

@dataclass(frozen=True)
class G2FieldReport:
    holds: bool
    certificate: DifferentialForm


def is_g2_vector_field(g2, X):
    """X preserves phi iff d(X _| phi) = 0 (phi closed); cross-checked with L_X phi."""
    g2.require_closed()
    certificate = exterior_derivative(interior_product(X, g2.phi))
    if lie_derivative(X, g2.phi) != certificate:
        raise IdentityViolation("Cartan formula disagrees with d(X _| phi) on a closed structure")
    return G2FieldReport(certificate.is_zero(), certificate)


def rochesterian_field_of(g2, alpha):
    """The unique X with X _| phi = d(alpha); NotRochesterian otherwise."""
    g2.require_closed()
    g2.require_constant()
    if alpha.degree != 1:
        raise DegreeError("Rochesterian forms are 1-forms")
    dalpha = exterior_derivative(alpha)
    X, residual = solve_contraction(g2.phi, dalpha)
    if not residual.is_zero():
        diagnostic = split_two_form(g2, dalpha).omega14 if g2.chart_dim == 7 else residual
        raise NotRochesterian("d(alpha) has a nonzero component outside the image of X -> X _| phi",
                              residual=diagnostic)
    return X


def is_rochesterian(g2, alpha):
    try:
        rochesterian_field_of(g2, alpha)
    except NotRochesterian:
        return False
    return True


def _bracket_from_fields(phi, xa, xb):
    return interior_product(xb, interior_product(xa, phi))


def rochesterian_bracket(g2, alpha, beta, check=True):
    """{alpha, beta} = phi(X_alpha, X_beta, .) = X_beta _| X_alpha _| phi.

    With ``check`` the closure identity d{alpha, beta} = [X_beta, X_alpha] _| phi
    is verified exactly.
    """
    xa = rochesterian_field_of(g2, alpha)
    xb = rochesterian_field_of(g2, beta)
    result = _bracket_from_fields(g2.phi, xa, xb)
    if check:
        expected = interior_product(vector_bracket(xb, xa), g2.phi)
        if exterior_derivative(result) != expected:
            raise IdentityViolation("d{alpha, beta} != [X_beta, X_alpha] _| phi")
    return result


@dataclass(frozen=True)
class JacobiDefect:
    lhs: DifferentialForm
    rhs: DifferentialForm

    @property
    def holds(self):
        return self.lhs == self.rhs


def jacobi_sum(g2, alpha, beta, gamma):
    """{alpha,{beta,gamma}} + {beta,{gamma,alpha}} + {gamma,{alpha,beta}}."""
    def br(a, b):
        return rochesterian_bracket(g2, a, b, check=False)

    return br(alpha, br(beta, gamma)) + br(beta, br(gamma, alpha)) + br(gamma, br(alpha, beta))


def jacobi_defect(g2, alpha, beta, gamma):
    """Both sides of the Jacobi defect identity.

    lhs is the cyclic sum of nested brackets, each bracket solving for its
    own field; rhs is d of the function d gamma(X_alpha, X_beta). Note the
    slot order: with first-slot contraction this is X_beta _| (X_alpha _| d gamma).
    """
    xa = rochesterian_field_of(g2, alpha)
    xb = rochesterian_field_of(g2, beta)
    rochesterian_field_of(g2, gamma)
    lhs = jacobi_sum(g2, alpha, beta, gamma)
    rhs = exterior_derivative(interior_product(xb, interior_product(xa, exterior_derivative(gamma))))
    return JacobiDefect(lhs, rhs)


# --- morphisms -----------------------------------------------------------------

@dataclass(frozen=True)
class MorphismReport:
    holds: bool
    defect: DifferentialForm


def is_g2_morphism(g2_src, g2_dst, mapping):
    """psi^* phi_dst - phi_src and whether it vanishes."""
    if mapping.source_dim != 7 or mapping.target_dim != 7:
        raise UnsupportedStructure("G2-morphisms act between 7-dimensional charts")
    defect = pullback(mapping, g2_dst.phi) - g2_src.phi
    return MorphismReport(defect.is_zero(), defect)


@dataclass(frozen=True)
class GraphReport:
    restricted: DifferentialForm
    vanishes: bool


def product_form(g2_1, g2_2):
    """pi_1^* phi_1 - pi_2^* phi_2 on the 14-variable product chart."""
    pi1 = PolynomialMap.projection(14, range(1, 8))
    pi2 = PolynomialMap.projection(14, range(8, 15))
    return pullback(pi1, g2_1.phi) - pullback(pi2, g2_2.phi)


def graph_criterion(g2_1, g2_2, upsilon):
    """Restriction of the product form to the graph of ``upsilon``.

    Computed by pulling back along p -> (p, upsilon(p)); the result is
    checked against phi_1 - upsilon^* phi_2.
    """
    if upsilon.source_dim != 7 or upsilon.target_dim != 7:
        raise UnsupportedStructure("graph criterion needs a map between 7-dimensional charts")
    restricted = pullback(upsilon.graph(), product_form(g2_1, g2_2))
    if restricted != g2_1.phi - pullback(upsilon, g2_2.phi):
        raise IdentityViolation("graph restriction differs from phi_1 - upsilon^* phi_2")
    return GraphReport(restricted, restricted.is_zero())


@dataclass(frozen=True)
class BracketPullbackReport:
    lhs: DifferentialForm
    rhs: DifferentialForm

    @property
    def equal(self):
        return self.lhs == self.rhs

    @property
    def difference(self):
        return self.lhs - self.rhs


def bracket_pullback_check(g2_src, g2_dst, mapping, alpha, beta):
    """psi^*{alpha, beta} against {psi^* alpha, psi^* beta}."""
    lhs = pullback(mapping, rochesterian_bracket(g2_dst, alpha, beta))
    rhs = rochesterian_bracket(g2_src, pullback(mapping, alpha), pullback(mapping, beta))
    return BracketPullbackReport(lhs, rhs)


@dataclass(frozen=True)
class FlowConstancyReport:
    lie_of_dalpha1: DifferentialForm
    in_kernel: bool


def flow_constancy_check(g2, alpha1, alpha2):
    """L_{X_alpha2}(d alpha1), and whether {alpha1, alpha2} has zero Rochesterian field.

    The two vanish together because d{alpha1, alpha2} = L_{X_alpha2}(d alpha1);
    that identity is checked exactly.
    """
    x2 = rochesterian_field_of(g2, alpha2)
    lie = lie_derivative(x2, exterior_derivative(alpha1))
    bracket = rochesterian_bracket(g2, alpha1, alpha2)
    dbracket = exterior_derivative(bracket)
    if dbracket != lie:
        raise IdentityViolation("d{alpha1, alpha2} != L_{X_alpha2}(d alpha1)")
    return FlowConstancyReport(lie, dbracket.is_zero())


# --- families of G2 fields -------------------------------------------------------

@lru_cache(maxsize=8)
def linear_g2_fields(g2):
    """Basis of linear fields x -> A x whose flow preserves a constant phi.

    For phi0 this is the 14-dimensional Lie algebra g2 inside so(7).
    """
    g2.require_constant()
    n = g2.chart_dim
    units = []
    columns = []
    rows = list(combinations(range(1, n + 1), 3))
    for i in range(n):
        for j in range(n):
            mat = [[int(r == i and c == j) for c in range(n)] for r in range(n)]
            X = VectorField.linear(mat)
            lie = lie_derivative(X, g2.phi)
            columns.append([lie.coefficient(r).constant_term for r in rows])
            units.append((i, j))
    system = linalg.transpose(columns)
    fields = []
    for vec in linalg.nullspace(system):
        mat = [[Fraction(0)] * n for _ in range(n)]
        for (i, j), v in zip(units, vec):
            mat[i][j] = v
        fields.append(VectorField.linear(mat))
    return tuple(fields)


def rotation_generator():
    """x3 e2 - x2 e3 + x5 e4 - x4 e5 - 2 x7 e6 + 2 x6 e7: rotation with angles (1, 1, -2)."""
    x = [Polynomial.variable(7, i) for i in range(1, 8)]
    return VectorField([0, x[2], -x[1], x[4], -x[3], -2 * x[6], 2 * x[5]], 7)


def integer_rotation():
    """The linear G2-morphism e2->e3, e3->-e2, e4->e5, e5->-e4, e6->-e6, e7->-e7."""
    images = {1: (1, 1), 2: (3, 1), 3: (2, -1), 4: (5, 1), 5: (4, -1), 6: (6, -1), 7: (7, -1)}
    mat = [[0] * 7 for _ in range(7)]
    for col, (row, sign) in images.items():
        mat[row - 1][col - 1] = sign
    return PolynomialMap.affine(mat)
