from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from g2calc import linalg, randgen
from g2calc.algebra import Polynomial, poly_add, poly_compose, poly_eval, poly_mul, poly_partial
from g2calc.errors import DimensionMismatch, LimitError
from g2calc.exterior import PolynomialMap

from strategies import polynomials, rational_points


def x(i, dim=3):
    return Polynomial.variable(dim, i)


# --- worked examples ---

def test_add_examples():
    assert poly_add(x(1) + 1, -x(1)) == 1
    p = x(1) * x(2) - 3
    assert poly_add(Polynomial.zero(3), p) == p
    half, third = Fraction(1, 2), Fraction(1, 3)
    assert poly_add(x(2) ** 2 * half, x(2) ** 2 * third) == x(2) ** 2 * Fraction(5, 6)


def test_mul_examples():
    assert poly_mul(x(1), x(2)).terms == {(1, 1, 0): 1}
    assert poly_mul(x(1) + 1, x(1) - 1) == x(1) ** 2 - 1
    assert poly_mul(x(1) + x(3), Polynomial.zero(3)).is_zero()


def test_partial_examples():
    assert poly_partial(x(1) ** 2 * x(3), 1) == 2 * x(1) * x(3)
    assert poly_partial(Polynomial.constant(3, 7), 2).is_zero()
    assert poly_partial(x(2) ** 3, 2) == 3 * x(2) ** 2


def test_eval_examples():
    p = Polynomial.variable(2, 1) ** 2 + Polynomial.variable(2, 2)
    assert poly_eval(p, [2, 3]) == 7
    q = 3 * x(1) * x(2) - Fraction(2, 5)
    assert poly_eval(q, [0, 0, 0]) == q.constant_term == Fraction(-2, 5)
    assert poly_eval(Polynomial.zero(3), [Fraction(1, 3), 4, -2]) == 0


def test_eval_keeps_float_inputs_float():
    value = poly_eval(x(1) * x(1), [0.5, 0.0, 0.0])
    assert isinstance(value, float) and value == 0.25


def test_compose_examples():
    shift = PolynomialMap([x(1) + 5, x(2), x(3)])
    assert poly_compose(x(1), shift) == x(1) + 5
    swap = PolynomialMap([x(2), x(1), x(3)])
    assert poly_compose(x(1) * x(2), swap) == x(1) * x(2)
    double = PolynomialMap([2 * x(1), x(2), x(3)])
    assert poly_compose(x(1) ** 2, double) == 4 * x(1) ** 2


def test_printing_is_graded_lex():
    p = Fraction(1, 2) * x(1) ** 2 * x(3) - x(2) + 1
    assert str(p) == "1/2*x1**2*x3 - x2 + 1"
    assert str(Polynomial.zero(2)) == "0"


# --- errors and limits ---

def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        x(1, 3) + x(1, 2)
    with pytest.raises(DimensionMismatch):
        poly_eval(x(1), [1, 2])


def test_limits():
    with pytest.raises(LimitError):
        Polynomial.zero(15)
    with pytest.raises(LimitError):
        x(1) ** 17
    assert (x(1) ** 16).degree == 16


def test_partial_index_out_of_range():
    with pytest.raises(IndexError):
        poly_partial(x(1), 4)


def test_floats_are_rejected_as_coefficients():
    with pytest.raises(TypeError):
        Polynomial(2, {(1, 0): 0.5})


# --- properties ---

P7 = polynomials(7, max_degree=4)


@given(P7, P7, P7)
@settings(max_examples=60)
def test_ring_axioms(p, q, r):
    assert (p + q) + r == p + (q + r)
    assert p * (q + r) == p * q + p * r
    assert p * q == q * p
    assert (p - p).is_zero()


@given(polynomials(7, max_degree=4), st.integers(1, 7), st.integers(1, 7))
@settings(max_examples=100)
def test_mixed_partials_commute(p, i, j):
    assert p.partial(i).partial(j) == p.partial(j).partial(i)


@given(polynomials(4, 3), polynomials(4, 3), st.lists(rational_points(4), min_size=20, max_size=20))
@settings(max_examples=10)
def test_eval_is_a_ring_homomorphism(p, q, points):
    for pt in points:
        assert poly_eval(p * q, pt) == poly_eval(p, pt) * poly_eval(q, pt)
        assert poly_eval(p + q, pt) == poly_eval(p, pt) + poly_eval(q, pt)


@given(P7, P7)
def test_representation_is_canonical(p, q):
    assert (p == q) == (dict(p.terms) == dict(q.terms))
    assert all(c != 0 for c in p.terms.values())
    if p == q:
        assert hash(p) == hash(q)


@given(polynomials(3, 3), polynomials(3, 2), polynomials(3, 2), polynomials(3, 2))
@settings(max_examples=40)
def test_compose_agrees_with_evaluation(p, a, b, c):
    composed = p.compose([a, b, c])
    for pt in ([1, 2, 3], [Fraction(-1, 2), 0, 4]):
        assert composed.evaluate(pt) == p.evaluate([a.evaluate(pt), b.evaluate(pt), c.evaluate(pt)])


# --- exact linear algebra against numpy ---

def test_linalg_against_numpy(rng):
    for _ in range(10):
        m = randgen.invertible_matrix(rng, 5)
        inv = linalg.inverse(m)
        assert linalg.matmul(m, inv) == linalg.identity(5)
        assert float(linalg.det(m)) == pytest.approx(np.linalg.det(np.array(m, dtype=float)))
    singular = [[1, 2], [2, 4]]
    with pytest.raises(ZeroDivisionError):
        linalg.inverse(singular)
    kernel = linalg.nullspace(singular)
    assert len(kernel) == 1 and linalg.matvec(singular, kernel[0]) == [0, 0]
    assert linalg.rank(singular) == 1
