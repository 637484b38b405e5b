"""Numerical flows as an independent check on the symbolic results.

Run with ``python3 demos/flows.py``.
"""

from g2calc import Polynomial, VectorField, preset_phi0
from g2calc.exterior import interior_product, poincare_primitive
from g2calc.g2 import flow_constancy_check, rotation_generator
from g2calc.numeric import DEFAULT_TOLERANCES, flow_constancy_sample, integrate_flow, rk4_order_ratio

START = [1, 0.5, -0.3, 0.2, 0.7, -1, 0.4]


def main():
    g2 = preset_phi0()
    rot = rotation_generator()
    stretch = VectorField([Polynomial.variable(7, 1)] + [0] * 6, 7)
    steps = DEFAULT_TOLERANCES.flow_steps
    for name, X in (("rotation generator", rot), ("x1 e1", stretch)):
        run = integrate_flow(X, START, 1.0, steps)
        print(f"{name}: drift of phi0 after t = 1 with {steps} RK4 steps: {run.final_drift:.3e}")
    print("halving the step shrinks the rotation drift by", f"{rk4_order_ratio(rot, START):.1f}x")

    a_rot = poincare_primitive(interior_product(rot, g2.phi))
    a_e2 = poincare_primitive(interior_product(VectorField.coordinate(7, 2), g2.phi))
    for name, pair in (("(R, R)", (a_rot, a_rot)), ("(R, e2)", (a_rot, a_e2))):
        certificate = flow_constancy_check(g2, *pair)
        drift = flow_constancy_sample(*pair, g2, [0.4, -0.2, 0.1, 0.3, -0.5, 0.2, 0.6])
        print(f"pair {name}: symbolic kernel certificate {certificate.in_kernel}, numeric deviation {drift:.2e}")


if __name__ == "__main__":
    main()
