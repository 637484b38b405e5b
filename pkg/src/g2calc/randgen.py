"""Seeded generators of random polynomials, forms, fields and maps.

Shared by the property tests and the ``selftest`` command. The default
seed comes from the ``G2CALC_SEED`` environment variable.
"""

import os
import random
from fractions import Fraction
from itertools import combinations

from . import linalg
from .algebra import Polynomial
from .exterior import DifferentialForm, PolynomialMap, VectorField, exterior_derivative, interior_product, poincare_primitive
from .g2 import linear_g2_fields


def default_seed():
    return int(os.environ.get("G2CALC_SEED", "20240607"))


def make_rng(seed=None):
    return random.Random(default_seed() if seed is None else seed)


def rational(rng, span=5, den=3):
    return Fraction(rng.randint(-span, span), rng.randint(1, den))


def polynomial(rng, dim, max_degree=3, terms=4, variables=None):
    variables = variables or dim
    out = {}
    for _ in range(terms):
        exps = [0] * dim
        for _ in range(rng.randint(0, max_degree)):
            exps[rng.randrange(variables)] += 1
        out[tuple(exps)] = out.get(tuple(exps), 0) + rational(rng)
    return Polynomial(dim, out)


def form(rng, dim, degree, max_degree=2, terms=3):
    basis = list(combinations(range(1, dim + 1), degree))
    out = {}
    for _ in range(terms):
        out[rng.choice(basis)] = polynomial(rng, dim, max_degree, terms=3)
    return DifferentialForm(dim, degree, out)


def field(rng, dim, max_degree=2):
    return VectorField([polynomial(rng, dim, max_degree, terms=2) for _ in range(dim)], dim)


def invertible_matrix(rng, n, span=2):
    """Integer matrix near the identity with nonzero determinant."""
    while True:
        m = [[(1 if i == j else 0) + (rng.randint(-span, span) if rng.random() < 0.3 else 0)
              for j in range(n)] for i in range(n)]
        if linalg.det(m) > 0:
            return m


def affine_map(rng, n):
    return PolynomialMap.affine(invertible_matrix(rng, n), [rational(rng) for _ in range(n)])


def polynomial_map(rng, source, target, max_degree=2):
    return PolynomialMap([polynomial(rng, source, max_degree, terms=3) for _ in range(target)], source_dim=source)


def g2_field(rng, g2, linear_terms=2):
    """Random affine field with linear part in the symmetry algebra of a constant phi."""
    n = g2.chart_dim
    X = VectorField([rational(rng) for _ in range(n)], n)
    basis = linear_g2_fields(g2)
    for _ in range(linear_terms):
        X = X + rng.choice(basis) * rational(rng)
    return X


def rochesterian_pair(rng, g2, gauge=True):
    """(alpha, X) with d(alpha) = X _| phi: a primitive of X _| phi plus an exact 1-form."""
    X = g2_field(rng, g2)
    alpha = poincare_primitive(interior_product(X, g2.phi))
    if gauge:
        alpha = alpha + exterior_derivative(DifferentialForm.function(polynomial(rng, g2.chart_dim, 2, terms=2)))
    return alpha, X
