import math
from fractions import Fraction

import numpy as np
import pytest

from g2calc import randgen
from g2calc.algebra import Polynomial
from g2calc.errors import NotRochesterian
from g2calc.exterior import (
    DifferentialForm,
    VectorField,
    exterior_derivative as d,
    interior_product,
    lie_derivative,
    poincare_primitive,
    vector_bracket,
)
from g2calc.g2 import flow_constancy_check, phi0_form, rotation_generator
from g2calc.numeric import (
    DEFAULT_TOLERANCES as TOL,
    Tolerances,
    dense_tensor,
    eval_form,
    finite_difference_d,
    flow_constancy_sample,
    integrate_flow,
    max_form_difference,
    rk4_order_ratio,
)

B = DifferentialForm.basis


def e(i, n=7):
    return VectorField.coordinate(n, i)


def xv(i, n=7):
    return Polynomial.variable(n, i)


def primitive(X, g2):
    return poincare_primitive(interior_product(X, g2.phi))


def float_points(rng, count, dim=7, span=1.0):
    return [[rng.uniform(-span, span) for _ in range(dim)] for _ in range(count)]


# --- multilinear evaluation ---

def test_eval_form_examples():
    phi = phi0_form()
    origin = [0] * 7
    basis = {i: [int(j == i) for j in range(1, 8)] for i in range(1, 8)}
    assert eval_form(phi, origin, [basis[1], basis[2], basis[3]]) == 1
    assert eval_form(phi, origin, [basis[1], basis[1], basis[3]]) == 0
    assert eval_form(phi, origin, [basis[2], basis[1], basis[3]]) == -1


def test_eval_form_exact_and_float_paths_agree(rng):
    for _ in range(10):
        a = randgen.form(rng, 5, 3)
        point = [randgen.rational(rng) for _ in range(5)]
        vectors = [[randgen.rational(rng) for _ in range(5)] for _ in range(3)]
        exact = eval_form(a, point, vectors)
        assert isinstance(exact, Fraction)
        approx = eval_form(a, [float(p) for p in point], [[float(c) for c in v] for v in vectors])
        assert approx == pytest.approx(float(exact), rel=TOL.multilinear_rel, abs=TOL.multilinear_rel)


def test_eval_form_arity_mismatch():
    with pytest.raises(ValueError):
        eval_form(phi0_form(), [0] * 7, [[1] + [0] * 6])


# --- finite differences ---

def test_finite_difference_examples():
    a = B(7, (3,)) * xv(2)
    values = finite_difference_d(a, [0.3, -0.2, 0.5, 0.1, 0.0, 1.0, -1.0])
    assert abs(values[(2, 3)] - 1) <= TOL.fd_single
    assert all(abs(v) <= TOL.fd_single for k, v in values.items() if k != (2, 3))
    constant = B(7, (1, 4)) * Fraction(5, 2) + B(7, (2, 6))
    assert all(abs(v) <= TOL.fd_constant for v in finite_difference_d(constant, [1.0] * 7).values())


def test_finite_difference_needs_positive_step():
    with pytest.raises(ValueError):
        finite_difference_d(B(3, (1,)), [0, 0, 0], h=0)


def test_finite_difference_agrees_with_symbolic_d(rng):
    for _ in range(20):
        n = rng.randint(3, 7)
        a = randgen.form(rng, n, rng.randint(0, n - 1))
        da = d(a)
        for point in float_points(rng, 5, n):
            approx = finite_difference_d(a, point)
            exact = {k: float(c) for k, c in da.evaluate(point).items()}
            for key, value in approx.items():
                assert abs(value - exact.get(key, 0.0)) <= TOL.fd_agreement


# --- flows ---

def test_translation_flow_is_exact():
    result = integrate_flow(e(1), [0.5] * 7, 2.0, 50)
    assert result.finite
    assert result.max_drift <= TOL.translation_drift
    t, x = result.trajectory[-1]
    assert t == pytest.approx(2.0) and x == pytest.approx([2.5] + [0.5] * 6)


def test_rotation_flow_preserves_phi0():
    result = integrate_flow(rotation_generator(), [1, 0.5, -0.3, 0.2, 0.7, -1, 0.4], 1.0, TOL.flow_steps)
    assert result.finite
    assert result.final_drift <= TOL.g2_drift
    assert result.max_drift <= TOL.g2_drift


def test_non_g2_flow_drifts():
    X = VectorField([xv(1)] + [0] * 6, 7)
    assert not lie_derivative(X, phi0_form()).is_zero()
    result = integrate_flow(X, [0.1] * 7, 1.0, TOL.flow_steps)
    assert result.final_drift > TOL.non_g2_drift
    # phi0 pulls back by the flow x1 -> e^t x1, so dx1 terms scale by e
    assert result.final_drift == pytest.approx(math.e - 1, rel=1e-8)


def test_flow_result_invariants():
    result = integrate_flow(rotation_generator(), [0.2] * 7, 0.5, 40)
    times = [t for t, _ in result.trajectory]
    assert len(times) == 41 and times[0] == 0.0
    assert all(a < b for a, b in zip(times, times[1:]))
    assert all(v >= 0 for v in result.pullback_drift)
    assert all(len(x) == 7 for _, x in result.trajectory)


def test_blow_up_is_reported():
    X = VectorField([xv(1) ** 2] + [0] * 6, 7)
    result = integrate_flow(X, [2.0] + [0.0] * 6, 5.0, 200)
    assert not result.finite


def test_flow_preconditions():
    with pytest.raises(ValueError):
        integrate_flow(e(1), [0] * 7, 1.0, 0)
    with pytest.raises(ValueError):
        integrate_flow(e(1), [0] * 7, math.inf, 10)


def test_rk4_order():
    low, high = TOL.rk4_order_window
    ratio = rk4_order_ratio(rotation_generator(), [1, 0.5, -0.3, 0.2, 0.7, -1, 0.4], t_end=1.0, steps=10)
    assert low <= ratio <= high


# --- flow constancy ---

def test_flow_constancy_for_constant_fields(phi0):
    deviation = flow_constancy_sample(primitive(e(1), phi0), primitive(e(4), phi0), phi0, [0.3] * 7)
    assert deviation <= TOL.constant_deviation


def test_flow_constancy_kernel_and_non_kernel(phi0):
    rot = primitive(rotation_generator(), phi0)
    start = [0.4, -0.2, 0.1, 0.3, -0.5, 0.2, 0.6]
    assert flow_constancy_check(phi0, rot, rot).in_kernel
    assert flow_constancy_sample(rot, rot, phi0, start) <= TOL.kernel_deviation
    assert not flow_constancy_check(phi0, rot, primitive(e(2), phi0)).in_kernel
    drift = flow_constancy_sample(rot, primitive(e(2), phi0), phi0, start)
    assert drift > 10 * TOL.g2_drift and drift > TOL.non_g2_drift


def test_flow_constancy_requires_rochesterian_forms(phi0):
    not_roch = B(7, (3,)) * xv(1) * xv(2)
    with pytest.raises(NotRochesterian):
        flow_constancy_sample(not_roch, primitive(e(1), phi0), phi0, [0] * 7)


# --- symbolic identities sampled in floats ---

def test_symbolic_identities_hold_at_float_points(rng, phi0):
    points = float_points(rng, 5)
    X, Y = rotation_generator(), randgen.field(rng, 7, 2)
    phi = phi0.phi
    checks = [
        (lie_derivative(X, phi), DifferentialForm.zero(7, 3)),
        (interior_product(vector_bracket(X, Y), phi),
         lie_derivative(X, interior_product(Y, phi)) - interior_product(Y, lie_derivative(X, phi))),
        (lie_derivative(Y, phi), d(interior_product(Y, phi))),
    ]
    for lhs, rhs in checks:
        assert max_form_difference(lhs, rhs, points) <= TOL.float_identity
    assert max_form_difference(lie_derivative(Y, phi), DifferentialForm.zero(7, 3), points) > TOL.float_identity


def test_tolerances_defaults():
    assert Tolerances() == TOL
    assert TOL.flow_steps == 1000 and TOL.rk4_order_window == (8.0, 32.0)
    assert TOL.kernel_deviation == 1e-6 and TOL.g2_drift == 1e-8
    tighter = Tolerances(kernel_deviation=1e-9)
    assert tighter.kernel_deviation < TOL.kernel_deviation


def test_dense_tensor_is_alternating():
    T = dense_tensor(phi0_form().evaluate([0] * 7), 7, 3)
    assert np.allclose(T, -np.swapaxes(T, 0, 1)) and np.allclose(T, -np.swapaxes(T, 1, 2))
    assert T[0, 1, 2] == 1 and T[1, 4, 6] == -1
