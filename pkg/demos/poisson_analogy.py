"""The symplectic side of the analogy: Hamiltonian fields, the Poisson
bracket and its Jacobi identity, and symplectomorphisms.

Run with ``python3 demos/poisson_analogy.py``.
"""

from fractions import Fraction

from g2calc import Polynomial, PolynomialMap
from g2calc.symplectic import (
    hamiltonian_field,
    poisson_bracket,
    poisson_jacobi_check,
    preset_omega_std,
    symplectomorphism_bracket_check,
)


def main():
    s = preset_omega_std(2)
    x = [Polynomial.variable(4, i) for i in range(1, 5)]
    f, g, h = x[0] * x[1] ** 2, x[2] + x[0] * x[3], x[1] * x[2] * x[3]
    print("omega =", s.omega)
    print("X_f for f =", f, ":", hamiltonian_field(s, f))
    print("{f, g} =", poisson_bracket(s, f, g))
    print("Jacobi sum {f,{g,h}} + cyclic =", poisson_jacobi_check(s, f, g, h))

    plane = preset_omega_std(1)
    p, q = Polynomial.variable(2, 1), Polynomial.variable(2, 2)
    squeeze = PolynomialMap.linear([[2, 0], [0, Fraction(1, 2)]])
    doubling = PolynomialMap.scaling(2, 2)
    for name, mapping in (("squeeze (2x1, x2/2)", squeeze), ("doubling", doubling)):
        report = symplectomorphism_bracket_check(plane, plane, mapping, p ** 2 * q, q ** 3 + p)
        print(f"\n{name}: pullback commutes with the bracket: {report.equal}")
        if not report.equal:
            print("  defect:", report.difference)


if __name__ == "__main__":
    main()
