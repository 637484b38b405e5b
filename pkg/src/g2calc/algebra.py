"""Exact multivariate polynomials with rational coefficients.

Coefficients are :class:`fractions.Fraction` throughout; floats are refused
on the symbolic path. A monomial is a plain tuple of non-negative exponents
whose length is the ambient chart dimension.
"""

from fractions import Fraction
from numbers import Rational
from types import MappingProxyType

from .errors import DimensionMismatch, LimitError

MAX_DIM = 14
MAX_DEGREE = 16

__all__ = [
    "MAX_DIM",
    "MAX_DEGREE",
    "as_rational",
    "Polynomial",
    "poly_add",
    "poly_mul",
    "poly_partial",
    "poly_eval",
    "poly_compose",
]


def as_rational(value):
    """Coerce ints, Fractions and rational strings to Fraction.

    Floats are rejected: the symbolic path is exact by construction.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not coefficients")
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


def _grlex_key(exps):
    return (-sum(exps), tuple(-e for e in exps))


def _format_monomial(exps):
    parts = []
    for i, e in enumerate(exps, start=1):
        if e == 1:
            parts.append(f"x{i}")
        elif e > 1:
            parts.append(f"x{i}**{e}")
    return "*".join(parts)


class Polynomial:
    """Immutable sparse polynomial over the rationals in ``dim`` variables.

    Variables are numbered from 1, matching the coordinate names
    ``x1, ..., xn`` used by the form language.
    """

    __slots__ = ("_dim", "_terms", "_hash")

    def __init__(self, dim, terms=None):
        if not isinstance(dim, int) or dim < 1:
            raise ValueError(f"ambient dimension must be a positive integer, got {dim!r}")
        if dim > MAX_DIM:
            raise LimitError(f"ambient dimension {dim} exceeds the limit {MAX_DIM}")
        clean = {}
        if terms:
            for exps, coeff in terms.items():
                exps = tuple(exps)
                if len(exps) != dim:
                    raise DimensionMismatch(
                        f"monomial {exps} has length {len(exps)}, chart has {dim} variables")
                if any(e < 0 for e in exps):
                    raise ValueError(f"negative exponent in {exps}")
                if sum(exps) > MAX_DEGREE:
                    raise LimitError(f"monomial degree {sum(exps)} exceeds the limit {MAX_DEGREE}")
                coeff = as_rational(coeff)
                if coeff:
                    clean[exps] = clean.get(exps, 0) + coeff
                    if not clean[exps]:
                        del clean[exps]
        self._dim = dim
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, dim, terms):
        # trusted constructor: terms already canonical
        p = object.__new__(cls)
        p._dim = dim
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def zero(cls, dim):
        return cls(dim)

    @classmethod
    def constant(cls, dim, value):
        return cls(dim, {(0,) * dim: value})

    @classmethod
    def variable(cls, dim, i):
        """The coordinate function x_i (1-based)."""
        if not 1 <= i <= dim:
            raise IndexError(f"variable index {i} out of range 1..{dim}")
        exps = [0] * dim
        exps[i - 1] = 1
        return cls(dim, {tuple(exps): 1})

    @property
    def dim(self):
        return self._dim

    @property
    def terms(self):
        return MappingProxyType(self._terms)

    def items(self):
        """(monomial, coefficient) pairs in graded-lex order, highest first."""
        return sorted(self._terms.items(), key=lambda kv: _grlex_key(kv[0]))

    @property
    def degree(self):
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self._terms), default=-1)

    def is_zero(self):
        return not self._terms

    def is_constant(self):
        return all(not any(e) for e in self._terms)

    @property
    def constant_term(self):
        return self._terms.get((0,) * self._dim, Fraction(0))

    def homogeneous_parts(self):
        """Map total degree -> homogeneous component."""
        parts = {}
        for exps, c in self._terms.items():
            parts.setdefault(sum(exps), {})[exps] = c
        return {d: Polynomial._raw(self._dim, t) for d, t in parts.items()}

    def _check(self, other):
        if self._dim != other._dim:
            raise DimensionMismatch(f"polynomials on {self._dim} and {other._dim} variables")

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        return Polynomial.constant(self._dim, as_rational(other))

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self._terms)
        for exps, c in other._terms.items():
            s = out.get(exps, 0) + c
            if s:
                out[exps] = s
            else:
                out.pop(exps, None)
        return Polynomial._raw(self._dim, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self._dim, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, factor):
        factor = as_rational(factor)
        if not factor:
            return Polynomial._raw(self._dim, {})
        return Polynomial._raw(self._dim, {e: c * factor for e, c in self._terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            try:
                return self.scale(other)
            except TypeError:
                return NotImplemented
        self._check(other)
        out = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, 0) + c1 * c2
                if s:
                    out[e] = s
                else:
                    del out[e]
        for e in out:
            if sum(e) > MAX_DEGREE:
                raise LimitError(f"product degree {sum(e)} exceeds the limit {MAX_DEGREE}")
        return Polynomial._raw(self._dim, out)

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        result = Polynomial.constant(self._dim, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self._dim == other._dim and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_term == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._dim, frozenset(self._terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    def partial(self, i):
        """Exact partial derivative with respect to x_i (1-based)."""
        if not 1 <= i <= self._dim:
            raise IndexError(f"variable index {i} out of range 1..{self._dim}")
        k = i - 1
        out = {}
        for exps, c in self._terms.items():
            e = exps[k]
            if e:
                new = exps[:k] + (e - 1,) + exps[k + 1:]
                out[new] = c * e
        return Polynomial._raw(self._dim, out)

    def gradient(self):
        return [self.partial(i) for i in range(1, self._dim + 1)]

    def __call__(self, point):
        return self.evaluate(point)

    def evaluate(self, point):
        """Value at ``point``: exact for rational input, float otherwise."""
        point = list(point)
        if len(point) != self._dim:
            raise DimensionMismatch(f"point has {len(point)} coordinates, polynomial needs {self._dim}")
        exact = all(isinstance(v, (int, Fraction)) and not isinstance(v, bool) for v in point)
        if exact:
            point = [Fraction(v) for v in point]
            total = Fraction(0)
        else:
            point = [float(v) for v in point]
            total = 0.0
        for exps, c in self._terms.items():
            term = c if exact else float(c)
            for v, e in zip(point, exps):
                if e:
                    term *= v ** e
            total += term
        return total

    def compose(self, substitution):
        """Substitute x_i -> substitution[i-1].

        ``substitution`` is a sequence of Polynomials on a common source
        chart, or any object with a ``components`` sequence (a
        PolynomialMap). Its length must equal ``self.dim``.
        """
        comps = list(getattr(substitution, "components", substitution))
        if len(comps) != self._dim:
            raise DimensionMismatch(
                f"substitution provides {len(comps)} functions, polynomial has {self._dim} variables")
        if not comps:
            raise DimensionMismatch("empty substitution")
        src = comps[0].dim
        for q in comps:
            if q.dim != src:
                raise DimensionMismatch("substitution components live on different charts")
        powers = [{0: Polynomial.constant(src, 1)} for _ in comps]

        def power(k, e):
            cache = powers[k]
            if e not in cache:
                cache[e] = power(k, e - 1) * comps[k]
            return cache[e]

        result = Polynomial.zero(src)
        for exps, c in self._terms.items():
            term = Polynomial.constant(src, c)
            for k, e in enumerate(exps):
                if e:
                    term = term * power(k, e)
            result = result + term
        return result

    def __str__(self):
        if not self._terms:
            return "0"
        out = []
        for idx, (exps, c) in enumerate(self.items()):
            mono = _format_monomial(exps)
            neg = c < 0
            a = -c if neg else c
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            if idx == 0:
                out.append(("-" if neg else "") + body)
            else:
                out.append((" - " if neg else " + ") + body)
        return "".join(out)

    def __repr__(self):
        return f"Polynomial({self._dim}, {str(self)!r})"


def poly_add(p, q):
    return p + q


def poly_mul(p, q):
    return p * q


def poly_partial(p, i):
    return p.partial(i)


def poly_eval(p, point):
    return p.evaluate(point)


def poly_compose(p, mapping):
    return p.compose(mapping)
