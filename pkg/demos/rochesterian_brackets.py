"""Rochesterian 1-forms, their bracket, and how far the bracket is from
satisfying the Jacobi identity.

Run with ``python3 demos/rochesterian_brackets.py``.
"""

from g2calc import VectorField, preset_phi0
from g2calc.exterior import interior_product, poincare_primitive
from g2calc.g2 import (
    is_g2_vector_field,
    jacobi_defect,
    rochesterian_bracket,
    rochesterian_field_of,
    rotation_generator,
)


def primitive(X, g2):
    """A 1-form alpha with d(alpha) = X _| phi, from the Poincare homotopy operator."""
    return poincare_primitive(interior_product(X, g2.phi))


def main():
    g2 = preset_phi0()
    rot = rotation_generator()
    print("rotation generator R =", rot)
    print("R preserves phi0:", is_g2_vector_field(g2, rot).holds)

    alpha_rot = primitive(rot, g2)
    print("\nprimitive of R _| phi0:\n ", alpha_rot)
    print("its Rochesterian field is R again:", rochesterian_field_of(g2, alpha_rot) == rot)

    a1 = primitive(VectorField.coordinate(7, 1), g2)
    a2 = primitive(VectorField.coordinate(7, 2), g2)
    print("\n{alpha_e1, alpha_e2} =", rochesterian_bracket(g2, a1, a2))

    for name, triple in (("(e1, e2, R)", (a1, a2, alpha_rot)), ("(e2, e1, R)", (a2, a1, alpha_rot))):
        defect = jacobi_defect(g2, *triple)
        print(f"\nJacobi sum for {name}: {defect.lhs}")
        print(f"  exact defect d(d gamma(X_alpha, X_beta)): {defect.rhs}")
        print("  they agree:", defect.holds)


if __name__ == "__main__":
    main()
