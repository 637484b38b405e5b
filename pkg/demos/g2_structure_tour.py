"""Everything the standard 3-form on R^7 determines: metric, cross product,
Hodge dual and the 7 + 14 splitting of 2-forms.

Run with ``python3 demos/g2_structure_tour.py``.
"""

from fractions import Fraction

from g2calc import DifferentialForm, G2Structure, VectorField, preset_phi0
from g2calc.g2 import cross_product, hodge_star, metric_from_phi, phi0_form, split_two_form


def main():
    g2 = preset_phi0()
    print("phi0 =", g2.phi)

    report = metric_from_phi(g2)
    print("\nmetric is the identity:", all(report.gram_matrix[i][j] == (i == j) for i in range(7) for j in range(7)))
    scaled = metric_from_phi(G2Structure(phi0_form() * 8))
    print("metric of 8 phi0 (exact ninth-root path):", scaled.gram_matrix[0][0], "* identity")

    print("\ncross products of basis vectors:")
    e = [VectorField.coordinate(7, i) for i in range(1, 8)]
    for i in range(7):
        row = []
        for j in range(7):
            v = cross_product(g2, e[i], e[j])
            k = next((k for k, c in enumerate(v) if c), None)
            row.append("  0" if k is None else f"{'+' if v[k] > 0 else '-'}e{k + 1}")
        print(f"  e{i + 1} x .  " + " ".join(f"{c:>4}" for c in row))

    print("\nstar phi0 =", hodge_star(g2, phi0_form()))

    split = split_two_form(g2, DifferentialForm.basis(7, (2, 3)))
    print("\ndx[2,3] splits as")
    print("  omega7  =", split.omega7, f"  (= X _| phi0 with X = {split.witness_field})")
    print("  omega14 =", split.omega14)
    print("  one third of dx[2,3] lies in omega7:", split.omega7.coefficient((2, 3)) == Fraction(1, 3))


if __name__ == "__main__":
    main()
