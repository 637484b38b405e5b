"""Floating-point cross-checks for the exact engine.

Everything here is an independent route to a quantity the symbolic code
computes exactly: multilinear evaluation, central-difference exterior
derivatives, and fixed-step RK4 flows carrying their Jacobian along.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations
import math

import numpy as np

from . import linalg
from .exterior import canonical_index, exterior_derivative


@dataclass(frozen=True)
class Tolerances:
    """Every numeric tolerance used by the tests, the selftest and the CLI."""

    multilinear_rel: float = 1e-12
    fd_step: float = 1e-4
    fd_single: float = 1e-7
    fd_constant: float = 1e-10
    fd_agreement: float = 1e-6
    float_identity: float = 1e-10
    metric_scale: float = 1e-12
    metric_pullback: float = 1e-10
    translation_drift: float = 1e-12
    g2_drift: float = 1e-8
    non_g2_drift: float = 1e-3
    constant_deviation: float = 1e-10
    kernel_deviation: float = 1e-6
    rk4_order_window: tuple = (8.0, 32.0)
    flow_steps: int = 1000


DEFAULT_TOLERANCES = Tolerances()


def _exact(values):
    return all(isinstance(v, (int, Fraction)) and not isinstance(v, bool) for v in values)


class CompiledPolys:
    """Vectorized float evaluation of a fixed list of polynomials."""

    def __init__(self, polys):
        polys = list(polys)
        self.count = len(polys)
        monos = sorted({e for p in polys for e in p.terms})
        self.dim = polys[0].dim if polys else 0
        index = {m: i for i, m in enumerate(monos)}
        self.exponents = np.array(monos, dtype=float).reshape(len(monos), self.dim)
        self.coeffs = np.zeros((self.count, len(monos)))
        for r, p in enumerate(polys):
            for e, c in p.terms.items():
                self.coeffs[r, index[e]] = float(c)

    def __call__(self, x):
        if not len(self.exponents):
            return np.zeros(self.count)
        monomials = np.prod(np.power(np.asarray(x, dtype=float), self.exponents), axis=1)
        return self.coeffs @ monomials


def eval_form(a, point, vectors):
    """a_point(v1, ..., vk): sum over I of a_I(point) det(V restricted to I).

    Exact when point and vectors are rational.
    """
    vectors = [list(v) for v in vectors]
    if len(vectors) != a.degree:
        raise ValueError(f"{a.degree}-form needs {a.degree} vectors, got {len(vectors)}")
    if a.degree == 0:
        return a.as_function().evaluate(point)
    exact = _exact(point) and all(_exact(v) for v in vectors)
    total = Fraction(0) if exact else 0.0
    for idx, coeff in a.terms.items():
        sub = [[v[i - 1] for v in vectors] for i in idx]
        c = coeff.evaluate(point)
        if exact:
            total += c * linalg.det(sub)
        else:
            total += float(c) * float(np.linalg.det(np.array(sub, dtype=float)))
    return total


def finite_difference_d(a, point, h=DEFAULT_TOLERANCES.fd_step):
    """Central-difference estimate of d(a) coefficients at ``point``.

    (da)_J = sum_m (-1)^m d/dx_{j_m} a_{J minus j_m}.
    """
    if not h > 0:
        raise ValueError("step must be positive")
    n, k = a.dim, a.degree
    point = np.asarray(point, dtype=float)
    coeffs = {idx: CompiledPolys([c]) for idx, c in a.terms.items()}
    out = {}
    for J in combinations(range(1, n + 1), k + 1):
        total = 0.0
        for m, j in enumerate(J):
            rest = J[:m] + J[m + 1:]
            f = coeffs.get(rest)
            if f is None:
                continue
            step = np.zeros(n)
            step[j - 1] = h
            deriv = (f(point + step)[0] - f(point - step)[0]) / (2 * h)
            total += -deriv if m & 1 else deriv
        out[J] = total
    return out


def dense_tensor(values, n, k):
    """Alternating k-tensor from {sorted multi-index: value}."""
    T = np.zeros((n,) * k)
    for idx, c in values.items():
        for perm in permutations(idx):
            sign, _ = canonical_index(perm)
            T[tuple(i - 1 for i in perm)] = sign * float(c)
    return T


def _pull_tensor(T, J):
    for _ in range(T.ndim):
        T = np.tensordot(T, J, axes=([0], [0]))
    return T


@dataclass
class FlowResult:
    trajectory: list = field(default_factory=list)
    pullback_drift: list = field(default_factory=list)
    finite: bool = True

    @property
    def final_drift(self):
        return self.pullback_drift[-1] if self.pullback_drift else 0.0

    @property
    def max_drift(self):
        return max(self.pullback_drift, default=0.0)


def _rk4_flow(X, start, t_end, steps):
    """Yield (t, x, J) for the flow of X and its variational equation dJ/dt = DX(x) J."""
    n = X.dim
    vec = CompiledPolys(X.components)
    jac = CompiledPolys([c.partial(j) for c in X.components for j in range(1, n + 1)])

    def rhs(x, J):
        return vec(x), jac(x).reshape(n, n) @ J

    x = np.asarray(start, dtype=float).copy()
    J = np.eye(n)
    h = float(t_end) / steps
    yield 0.0, x.copy(), J.copy()
    for s in range(1, steps + 1):
        k1x, k1j = rhs(x, J)
        k2x, k2j = rhs(x + 0.5 * h * k1x, J + 0.5 * h * k1j)
        k3x, k3j = rhs(x + 0.5 * h * k2x, J + 0.5 * h * k2j)
        k4x, k4j = rhs(x + h * k3x, J + h * k3j)
        x = x + (h / 6.0) * (k1x + 2 * k2x + 2 * k3x + k4x)
        J = J + (h / 6.0) * (k1j + 2 * k2j + 2 * k3j + k4j)
        yield s * h, x.copy(), J.copy()


def _form_drift_run(X, form, start, t_end, steps):
    n, k = form.dim, form.degree
    idx = sorted(form.terms)
    coeffs = CompiledPolys([form.terms[i] for i in idx]) if idx else None

    def tensor_at(x):
        if coeffs is None:
            return np.zeros((n,) * k)
        return dense_tensor(dict(zip(idx, coeffs(x))), n, k)

    result = FlowResult()
    T0 = None
    for t, x, J in _rk4_flow(X, start, t_end, steps):
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(J))):
            result.finite = False
            break
        T = tensor_at(x)
        if T0 is None:
            T0 = T
        drift = float(np.max(np.abs(_pull_tensor(T, J) - T0))) if T.size else 0.0
        result.trajectory.append((t, x))
        result.pullback_drift.append(drift)
    return result


def integrate_flow(X, start, t_end, steps, phi=None):
    """RK4 flow of X from ``start`` with the drift of phi under the flow.

    Drift at time t is max |(Phi_t^* phi)_start - phi_start| over frame
    triples, with d Phi_t taken from the variational equation. ``phi``
    defaults to the standard G2 form on 7-dimensional charts.
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    if not math.isfinite(t_end):
        raise ValueError("t_end must be finite")
    if phi is None:
        from .g2 import phi0_form
        phi = phi0_form()
    # a blow-up is reported through ``finite``; numpy's overflow warnings add nothing
    with np.errstate(over="ignore", invalid="ignore"):
        return _form_drift_run(X, phi, start, t_end, steps)


def flow_constancy_sample(alpha1, alpha2, g2, start, t_end=1.0, steps=DEFAULT_TOLERANCES.flow_steps):
    """Max deviation of d(alpha1), transported by the flow of X_alpha2, from its initial value."""
    from .g2 import rochesterian_field_of

    x2 = rochesterian_field_of(g2, alpha2)
    rochesterian_field_of(g2, alpha1)
    run = _form_drift_run(x2, exterior_derivative(alpha1), start, t_end, steps)
    return run.max_drift


def rk4_order_ratio(X, start, t_end=1.0, steps=10, phi=None):
    """Ratio of final drift at ``steps`` to that at ``2*steps``; about 16 for RK4."""
    coarse = integrate_flow(X, start, t_end, steps, phi).final_drift
    fine = integrate_flow(X, start, t_end, 2 * steps, phi).final_drift
    return coarse / fine


def max_form_difference(a, b, points):
    """max over points and components of |a - b|, each side evaluated in floats separately."""
    worst = 0.0
    for p in points:
        p = [float(c) for c in p]
        va, vb = a.evaluate(p), b.evaluate(p)
        for key in set(va) | set(vb):
            worst = max(worst, abs(float(va.get(key, 0.0)) - float(vb.get(key, 0.0))))
    return worst
