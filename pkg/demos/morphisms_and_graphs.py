"""G2-morphisms seen three ways: pulling phi back, restricting the product
form to the graph, and transporting Rochesterian brackets.

Run with ``python3 demos/morphisms_and_graphs.py``.
"""

from g2calc import PolynomialMap, VectorField, preset_phi0
from g2calc.exterior import interior_product, poincare_primitive
from g2calc.g2 import bracket_pullback_check, graph_criterion, integer_rotation, is_g2_morphism


def main():
    g2 = preset_phi0()
    maps = {
        "translation": PolynomialMap.translation([1, 0, -2, 0, 3, 0, 1]),
        "rotation R": integer_rotation(),
        "doubling": PolynomialMap.scaling(7, 2),
    }
    alpha = poincare_primitive(interior_product(VectorField.coordinate(7, 1), g2.phi))
    beta = poincare_primitive(interior_product(VectorField.coordinate(7, 2), g2.phi))
    for name, mapping in maps.items():
        morphism = is_g2_morphism(g2, g2, mapping)
        graph = graph_criterion(g2, g2, mapping)
        brackets = bracket_pullback_check(g2, g2, mapping, alpha, beta)
        print(f"{name}:")
        print("  pulls phi0 back to phi0:", morphism.holds)
        print("  product form vanishes on the graph:", graph.vanishes)
        if not graph.vanishes:
            print("    restriction =", graph.restricted)
        print("  bracket commutes with pullback:", brackets.equal)
        if not brackets.equal:
            print("    defect =", brackets.difference)


if __name__ == "__main__":
    main()
