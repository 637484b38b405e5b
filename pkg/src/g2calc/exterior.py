"""Exterior calculus on polynomial charts.

Forms are sparse maps from strictly increasing 1-based multi-indices to
:class:`~g2calc.algebra.Polynomial` coefficients. Contraction always uses
the first slot: ``(X _| a)(Y1, ..., Y_{k-1}) = a(X, Y1, ..., Y_{k-1})``.
"""

from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from . import linalg
from .algebra import Polynomial, as_rational
from .errors import DegreeError, DimensionMismatch, InverseError, NotClosed

__all__ = [
    "canonical_index",
    "DifferentialForm",
    "VectorField",
    "PolynomialMap",
    "wedge",
    "exterior_derivative",
    "is_top_degree",
    "interior_product",
    "lie_derivative",
    "vector_bracket",
    "pullback",
    "pushforward_inverse",
    "poincare_primitive",
    "form_apply",
    "contraction_matrix",
    "solve_contraction",
]


def canonical_index(indices):
    """Sort an index tuple, returning (sign, sorted_tuple).

    A repeated index gives sign 0 (the basis form vanishes).
    """
    idx = list(indices)
    if len(set(idx)) != len(idx):
        return 0, None
    sign = 1
    # insertion sort; each swap flips the sign
    for i in range(1, len(idx)):
        j = i
        while j > 0 and idx[j - 1] > idx[j]:
            idx[j - 1], idx[j] = idx[j], idx[j - 1]
            sign = -sign
            j -= 1
    return sign, tuple(idx)


def _merge_sign(left, right):
    """Sign of the shuffle sorting left+right, both already increasing."""
    inversions = 0
    for a in left:
        for b in right:
            if a > b:
                inversions += 1
    return -1 if inversions & 1 else 1


def _as_poly(dim, value):
    if isinstance(value, Polynomial):
        if value.dim != dim:
            raise DimensionMismatch(f"coefficient on {value.dim} variables, chart has {dim}")
        return value
    return Polynomial.constant(dim, as_rational(value))


class DifferentialForm:
    """Immutable k-form on an n-dimensional coordinate chart."""

    __slots__ = ("_dim", "_degree", "_terms", "_hash")

    def __init__(self, dim, degree, terms=None):
        if not 0 <= degree <= dim:
            raise DegreeError(f"degree {degree} is impossible on a {dim}-dimensional chart")
        acc = {}
        for indices, coeff in (terms or {}).items():
            indices = tuple(indices)
            if len(indices) != degree:
                raise DegreeError(f"multi-index {indices} has length {len(indices)}, expected {degree}")
            for i in indices:
                if not 1 <= i <= dim:
                    raise IndexError(f"index {i} out of range 1..{dim}")
            sign, key = canonical_index(indices)
            if not sign:
                continue
            poly = _as_poly(dim, coeff)
            if sign < 0:
                poly = -poly
            acc[key] = acc[key] + poly if key in acc else poly
        self._dim = dim
        self._degree = degree
        self._terms = {k: v for k, v in acc.items() if v}
        self._hash = None

    @classmethod
    def _raw(cls, dim, degree, terms):
        f = object.__new__(cls)
        f._dim = dim
        f._degree = degree
        f._terms = {k: v for k, v in terms.items() if v}
        f._hash = None
        return f

    @classmethod
    def zero(cls, dim, degree):
        return cls(dim, degree)

    @classmethod
    def function(cls, poly):
        """The 0-form given by a polynomial."""
        return cls(poly.dim, 0, {(): poly})

    @classmethod
    def basis(cls, dim, indices, coeff=1):
        return cls(dim, len(indices), {tuple(indices): coeff})

    @property
    def dim(self):
        return self._dim

    @property
    def degree(self):
        return self._degree

    @property
    def terms(self):
        return dict(self._terms)

    def items(self):
        """(multi-index, coefficient) pairs in lexicographic index order."""
        return sorted(self._terms.items())

    def coefficient(self, indices):
        sign, key = canonical_index(indices)
        if not sign:
            return Polynomial.zero(self._dim)
        c = self._terms.get(key, Polynomial.zero(self._dim))
        return c if sign > 0 else -c

    def is_zero(self):
        return not self._terms

    def is_constant(self):
        return all(c.is_constant() for c in self._terms.values())

    def as_function(self):
        if self._degree != 0:
            raise DegreeError(f"expected a 0-form, got degree {self._degree}")
        return self._terms.get((), Polynomial.zero(self._dim))

    def _check(self, other):
        if not isinstance(other, DifferentialForm):
            raise TypeError(f"expected DifferentialForm, got {type(other).__name__}")
        if self._dim != other._dim:
            raise DimensionMismatch(f"forms on {self._dim}- and {other._dim}-dimensional charts")
        if self._degree != other._degree:
            raise DegreeError(f"cannot add forms of degree {self._degree} and {other._degree}")

    def __add__(self, other):
        if not isinstance(other, DifferentialForm):
            return NotImplemented
        self._check(other)
        out = dict(self._terms)
        for k, v in other._terms.items():
            out[k] = out[k] + v if k in out else v
        return DifferentialForm._raw(self._dim, self._degree, out)

    def __neg__(self):
        return DifferentialForm._raw(self._dim, self._degree, {k: -v for k, v in self._terms.items()})

    def __sub__(self, other):
        if not isinstance(other, DifferentialForm):
            return NotImplemented
        return self + (-other)

    def __mul__(self, scalar):
        if isinstance(scalar, DifferentialForm):
            return NotImplemented
        if isinstance(scalar, Polynomial):
            if scalar.dim != self._dim:
                raise DimensionMismatch("scalar function lives on a different chart")
            return DifferentialForm._raw(self._dim, self._degree,
                                         {k: v * scalar for k, v in self._terms.items()})
        try:
            s = as_rational(scalar)
        except TypeError:
            return NotImplemented
        return DifferentialForm._raw(self._dim, self._degree, {k: v.scale(s) for k, v in self._terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, DifferentialForm):
            return NotImplemented
        return (self._dim, self._degree, self._terms) == (other._dim, other._degree, other._terms)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._dim, self._degree, frozenset(self._terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    def evaluate(self, point):
        """Coefficients at a point as {multi-index: value}."""
        return {k: v.evaluate(point) for k, v in self.items()}

    def to_text(self):
        """Canonical serialization, e.g. ``+ (1) dx[1,2,3] + (-1/3) dx[4,5]``."""
        if not self._terms:
            return "0"
        parts = []
        for idx, coeff in self.items():
            if idx:
                parts.append(f"+ ({coeff}) dx[{','.join(map(str, idx))}]")
            else:
                parts.append(f"+ ({coeff})")
        return " ".join(parts)

    __str__ = to_text

    def __repr__(self):
        return f"DifferentialForm(dim={self._dim}, degree={self._degree}, {self.to_text()!r})"


class VectorField:
    """Immutable polynomial vector field, components in the coordinate frame."""

    __slots__ = ("_dim", "_components", "_hash")

    def __init__(self, components, dim=None):
        comps = list(components)
        if dim is None:
            polys = [c for c in comps if isinstance(c, Polynomial)]
            dim = polys[0].dim if polys else len(comps)
        if len(comps) != dim:
            raise DimensionMismatch(f"{len(comps)} components given for a {dim}-dimensional chart")
        self._dim = dim
        self._components = tuple(_as_poly(dim, c) for c in comps)
        self._hash = None

    @classmethod
    def zero(cls, dim):
        return cls([0] * dim)

    @classmethod
    def coordinate(cls, dim, i):
        """The coordinate field e_i = d/dx_i (1-based)."""
        if not 1 <= i <= dim:
            raise IndexError(f"coordinate field index {i} out of range 1..{dim}")
        return cls([int(j == i) for j in range(1, dim + 1)])

    @classmethod
    def linear(cls, matrix, offset=None):
        """The affine field x -> A x + b."""
        n = len(matrix)
        xs = [Polynomial.variable(n, j) for j in range(1, n + 1)]
        comps = []
        for i, row in enumerate(matrix):
            p = Polynomial.constant(n, offset[i] if offset is not None else 0)
            for a, x in zip(row, xs):
                if a:
                    p = p + x.scale(a)
            comps.append(p)
        return cls(comps, dim=n)

    @classmethod
    def radial(cls, dim):
        return cls([Polynomial.variable(dim, i) for i in range(1, dim + 1)], dim=dim)

    @property
    def dim(self):
        return self._dim

    @property
    def components(self):
        return self._components

    def __getitem__(self, i):
        return self._components[i]

    def __len__(self):
        return self._dim

    def __iter__(self):
        return iter(self._components)

    def is_zero(self):
        return not any(self._components)

    def is_constant(self):
        return all(c.is_constant() for c in self._components)

    def _check(self, other):
        if not isinstance(other, VectorField):
            raise TypeError(f"expected VectorField, got {type(other).__name__}")
        if self._dim != other._dim:
            raise DimensionMismatch(f"fields on {self._dim}- and {other._dim}-dimensional charts")

    def __add__(self, other):
        self._check(other)
        return VectorField([a + b for a, b in zip(self._components, other._components)], self._dim)

    def __sub__(self, other):
        self._check(other)
        return VectorField([a - b for a, b in zip(self._components, other._components)], self._dim)

    def __neg__(self):
        return VectorField([-a for a in self._components], self._dim)

    def __mul__(self, scalar):
        if isinstance(scalar, Polynomial):
            return VectorField([a * scalar for a in self._components], self._dim)
        try:
            s = as_rational(scalar)
        except TypeError:
            return NotImplemented
        return VectorField([a.scale(s) for a in self._components], self._dim)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, VectorField):
            return NotImplemented
        return self._components == other._components

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._components)
        return self._hash

    def apply(self, poly):
        """Directional derivative X(f) = sum_j X^j df/dx_j."""
        out = Polynomial.zero(self._dim)
        for j, comp in enumerate(self._components, start=1):
            if comp:
                out = out + comp * poly.partial(j)
        return out

    def evaluate(self, point):
        return [c.evaluate(point) for c in self._components]

    def to_text(self):
        return "[" + ", ".join(str(c) for c in self._components) + "]"

    __str__ = to_text

    def __repr__(self):
        return f"VectorField({self.to_text()!r})"


class PolynomialMap:
    """Polynomial map from a ``source_dim`` chart to a ``target_dim`` chart.

    When ``inverse`` is supplied it is certified on construction: both
    compositions must equal the identity as polynomial maps.
    """

    __slots__ = ("_components", "_source_dim", "_inverse")

    def __init__(self, components, inverse=None, source_dim=None):
        comps = list(components)
        if not comps:
            raise ValueError("a map needs at least one coordinate function")
        if source_dim is None:
            polys = [c for c in comps if isinstance(c, Polynomial)]
            if not polys:
                raise ValueError("source dimension cannot be inferred from constant components")
            source_dim = polys[0].dim
        self._source_dim = source_dim
        self._components = tuple(_as_poly(source_dim, c) for c in comps)
        self._inverse = None
        if inverse is not None:
            inv = inverse if isinstance(inverse, PolynomialMap) else PolynomialMap(inverse, source_dim=self.target_dim)
            if inv.source_dim != self.target_dim or inv.target_dim != self.source_dim:
                raise InverseError("inverse has the wrong shape")
            if not self.compose(inv).is_identity() or not inv.compose(self).is_identity():
                raise InverseError("supplied inverse fails the exact identity-composition check")
            inv_copy = PolynomialMap(inv._components, source_dim=inv._source_dim)
            inv_copy._inverse = self
            self._inverse = inv_copy

    @property
    def source_dim(self):
        return self._source_dim

    @property
    def target_dim(self):
        return len(self._components)

    @property
    def components(self):
        return self._components

    @property
    def inverse(self):
        return self._inverse

    @classmethod
    def identity(cls, n):
        xs = [Polynomial.variable(n, i) for i in range(1, n + 1)]
        m = cls(xs)
        m._inverse = cls(xs)
        m._inverse._inverse = m
        return m

    @classmethod
    def affine(cls, matrix, offset=None):
        """x -> A x + b, carrying its exact inverse when A is invertible."""
        m = [[as_rational(v) for v in row] for row in matrix]
        rows, cols = len(m), len(m[0])
        b = [as_rational(v) for v in (offset or [0] * rows)]
        xs = [Polynomial.variable(cols, j) for j in range(1, cols + 1)]
        comps = []
        for i in range(rows):
            p = Polynomial.constant(cols, b[i])
            for a, x in zip(m[i], xs):
                if a:
                    p = p + x.scale(a)
            comps.append(p)
        inverse = None
        if rows == cols:
            try:
                ainv = linalg.inverse(m)
            except ZeroDivisionError:
                ainv = None
            if ainv is not None:
                binv = [-v for v in linalg.matvec(ainv, b)]
                ys = [Polynomial.variable(rows, j) for j in range(1, rows + 1)]
                inverse = []
                for i in range(cols):
                    p = Polynomial.constant(rows, binv[i])
                    for a, y in zip(ainv[i], ys):
                        if a:
                            p = p + y.scale(a)
                    inverse.append(p)
        return cls(comps, inverse=inverse, source_dim=cols)

    @classmethod
    def linear(cls, matrix):
        return cls.affine(matrix)

    @classmethod
    def translation(cls, offset):
        n = len(offset)
        return cls.affine(linalg.identity(n), offset)

    @classmethod
    def scaling(cls, n, factor):
        f = as_rational(factor)
        return cls.affine([[f if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def projection(cls, source_dim, indices):
        """(x_1..x_N) -> (x_{i1}, ..., x_{im}), 1-based indices."""
        return cls([Polynomial.variable(source_dim, i) for i in indices], source_dim=source_dim)

    def graph(self):
        """The embedding p -> (p, self(p)) into the product chart."""
        n = self._source_dim
        xs = [Polynomial.variable(n, i) for i in range(1, n + 1)]
        return PolynomialMap(xs + list(self._components), source_dim=n)

    def compose(self, inner):
        """self o inner."""
        if inner.target_dim != self._source_dim:
            raise DimensionMismatch(
                f"cannot compose: inner map lands in {inner.target_dim} dims, outer expects {self._source_dim}")
        comps = [c.compose(inner._components) for c in self._components]
        out = PolynomialMap(comps, source_dim=inner._source_dim)
        if self._inverse is not None and inner._inverse is not None:
            inv = PolynomialMap([c.compose(self._inverse._components) for c in inner._inverse._components],
                                source_dim=self.target_dim)
            out._inverse = inv
            inv._inverse = out
        return out

    def with_inverse(self, inverse):
        return PolynomialMap(self._components, inverse=inverse, source_dim=self._source_dim)

    def is_identity(self):
        if self._source_dim != self.target_dim:
            return False
        return all(c == Polynomial.variable(self._source_dim, i)
                   for i, c in enumerate(self._components, start=1))

    def is_affine(self):
        return all(c.degree <= 1 for c in self._components)

    def jacobian(self):
        """Matrix of partials, rows indexed by target coordinate."""
        return [[c.partial(j) for j in range(1, self._source_dim + 1)] for c in self._components]

    def __call__(self, point):
        return [c.evaluate(point) for c in self._components]

    def __eq__(self, other):
        if not isinstance(other, PolynomialMap):
            return NotImplemented
        return self._source_dim == other._source_dim and self._components == other._components

    def __hash__(self):
        return hash((self._source_dim, self._components))

    def to_text(self):
        return "[" + ", ".join(str(c) for c in self._components) + "]"

    def __repr__(self):
        return f"PolynomialMap({self.to_text()!r}, source_dim={self._source_dim})"


def _same_dim(a, b):
    if a.dim != b.dim:
        raise DimensionMismatch(f"operands on {a.dim}- and {b.dim}-dimensional charts")


def wedge(a, b, *more):
    """Exterior product; extra arguments are folded left to right."""
    if more:
        return wedge(wedge(a, b), *more)
    _same_dim(a, b)
    n = a.dim
    k = a.degree + b.degree
    if k > n:
        raise DegreeError(f"wedge of degree {k} does not exist on a {n}-dimensional chart")
    out = {}
    for i1, f in a._terms.items():
        s1 = set(i1)
        for i2, g in b._terms.items():
            if s1.intersection(i2):
                continue
            key = tuple(sorted(i1 + i2))
            term = f * g
            if _merge_sign(i1, i2) < 0:
                term = -term
            out[key] = out[key] + term if key in out else term
    return DifferentialForm._raw(n, k, out)


def is_top_degree(a):
    return a.degree == a.dim


def exterior_derivative(a):
    """Exterior derivative. Top-degree input is an error: no (n+1)-forms exist."""
    n = a.dim
    if a.degree >= n:
        raise DegreeError(f"d of a top-degree ({n}) form is undefined on this chart")
    out = {}
    for idx, f in a._terms.items():
        for j in range(1, n + 1):
            if j in idx:
                continue
            df = f.partial(j)
            if not df:
                continue
            below = sum(1 for i in idx if i < j)
            key = tuple(sorted(idx + (j,)))
            term = -df if below & 1 else df
            out[key] = out[key] + term if key in out else term
    return DifferentialForm._raw(n, a.degree + 1, out)


d = exterior_derivative


def interior_product(X, a):
    """X _| a, contracting into the first slot."""
    _same_dim(X, a)
    if a.degree == 0:
        raise DegreeError("interior product of a 0-form is undefined")
    out = {}
    comps = X.components
    for idx, f in a._terms.items():
        for m, i in enumerate(idx):
            xi = comps[i - 1]
            if not xi:
                continue
            key = idx[:m] + idx[m + 1:]
            term = xi * f
            if m & 1:
                term = -term
            out[key] = out[key] + term if key in out else term
    return DifferentialForm._raw(a.dim, a.degree - 1, out)


def form_apply(a, vectors):
    """a(X1, ..., Xk) as a polynomial (0-form coefficient)."""
    if len(vectors) != a.degree:
        raise DegreeError(f"{a.degree}-form needs {a.degree} arguments, got {len(vectors)}")
    for X in vectors:
        a = interior_product(X, a)
    return a.as_function()


def lie_derivative(X, a):
    """Lie derivative by the Cartan formula d(X _| a) + X _| da."""
    _same_dim(X, a)
    if a.degree == 0:
        return DifferentialForm.function(X.apply(a.as_function()))
    result = exterior_derivative(interior_product(X, a))
    if not is_top_degree(a):
        result = result + interior_product(X, exterior_derivative(a))
    return result


def vector_bracket(X, Y):
    """[X, Y]^i = sum_j X^j d_j Y^i - Y^j d_j X^i."""
    _same_dim(X, Y)
    return VectorField([X.apply(yi) - Y.apply(xi) for xi, yi in zip(X.components, Y.components)], X.dim)


def pullback(mapping, a):
    """psi^* a on the source chart of ``mapping``."""
    if mapping.target_dim != a.dim:
        raise DimensionMismatch(f"map lands in {mapping.target_dim} dims, form lives in {a.dim}")
    n = mapping.source_dim
    if a.degree > n:
        raise DegreeError(f"a {a.degree}-form cannot be pulled back to a {n}-dimensional chart")
    comps = mapping.components
    differentials = {}

    def dpsi(i):
        if i not in differentials:
            differentials[i] = exterior_derivative(DifferentialForm.function(comps[i - 1]))
        return differentials[i]

    result = DifferentialForm.zero(n, a.degree)
    for idx, f in a._terms.items():
        term = DifferentialForm.function(f.compose(comps))
        for i in idx:
            term = wedge(term, dpsi(i))
        result = result + term
    return result


def pushforward_inverse(mapping, X):
    """The field p -> (d psi^{-1})_{psi(p)} X_{psi(p)} on the source chart."""
    inv = mapping.inverse
    if inv is None:
        raise InverseError("map carries no certified inverse")
    if X.dim != mapping.target_dim:
        raise DimensionMismatch(f"field on {X.dim} dims, map target has {mapping.target_dim}")
    comps = mapping.components
    x_at = [c.compose(comps) for c in X.components]
    jac = inv.jacobian()
    out = []
    for row in jac:
        total = Polynomial.zero(mapping.source_dim)
        for entry, xj in zip(row, x_at):
            if entry and xj:
                total = total + entry.compose(comps) * xj
        out.append(total)
    return VectorField(out, mapping.source_dim)


def poincare_primitive(a):
    """A (k-1)-form b with db = a, for closed a of degree k >= 1.

    Homotopy operator on the star-shaped chart: a monomial term
    x^m dx^I of total degree |m| contributes 1/(|m|+k) times the radial
    contraction of that term.
    """
    k = a.degree
    n = a.dim
    if k < 1:
        raise DegreeError("primitives exist only for forms of degree >= 1")
    if k < n and not exterior_derivative(a).is_zero():
        raise NotClosed("form is not closed; no primitive exists")
    out = {}
    for idx, f in a._terms.items():
        for exps, c in f.terms.items():
            weight = Fraction(1, sum(exps) + k) * c
            for m, i in enumerate(idx):
                e = list(exps)
                e[i - 1] += 1
                key = idx[:m] + idx[m + 1:]
                term = Polynomial._raw(n, {tuple(e): -weight if m & 1 else weight})
                out[key] = out[key] + term if key in out else term
    return DifferentialForm._raw(n, k - 1, out)


def contraction_matrix(form):
    """Rows: (k-1)-multi-indices; columns: e_i. Entry = coefficient of e_i _| form.

    Only meaningful for constant-coefficient forms; raises otherwise.
    """
    if not form.is_constant():
        raise ValueError("contraction matrix needs constant coefficients")
    n, k = form.dim, form.degree
    rows = list(combinations(range(1, n + 1), k - 1))
    pos = {r: i for i, r in enumerate(rows)}
    mat = [[Fraction(0)] * n for _ in rows]
    for i in range(1, n + 1):
        contracted = interior_product(VectorField.coordinate(n, i), form)
        for idx, c in contracted._terms.items():
            mat[pos[idx]][i - 1] = c.constant_term
    return rows, mat


def solve_contraction(form, target):
    """The unique X with X _| form = target, for constant ``form`` with injective contraction.

    Returns (X, residual); residual = target - X _| form, zero iff solvable.
    The left inverse is a constant matrix, so applying it to polynomial
    coefficient vectors solves every monomial's system at once.
    """
    if target.degree != form.degree - 1 or target.dim != form.dim:
        raise DegreeError("target must be a (k-1)-form on the same chart")
    rows, left = _contraction_left_inverse(form)
    n = form.dim
    comps = []
    for i in range(n):
        total = Polynomial.zero(n)
        for r, coeff in zip(rows, left[i]):
            if coeff:
                c = target._terms.get(r)
                if c is not None:
                    total = total + c.scale(coeff)
        comps.append(total)
    X = VectorField(comps, n)
    residual = target - interior_product(X, form)
    return X, residual


@lru_cache(maxsize=64)
def _contraction_left_inverse(form):
    rows, mat = contraction_matrix(form)
    try:
        return rows, linalg.left_inverse(mat)
    except ZeroDivisionError:
        raise DegreeError("contraction into this form is not injective") from None
