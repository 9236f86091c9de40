// Decide injectivity of a small layer and print the certificate.

#include <iostream>

#include "relucert/injectivity.hpp"

using namespace relucert;

int main()
{
    // x -> [(x1 + x2, x1 - x2, -x1)]_+
    Matrix w = Matrix::from_rows({{Rational(1), Rational(1)}, {Rational(1), Rational(-1)}, {Rational(-1), Rational(0)}});
    ReluLayer layer(w, Vector(3, Rational(0)));

    auto v = layer_injectivity(layer);
    std::cout << "injective: " << (v.injective ? "yes" : "no") << "\n";
    if (v.collision) {
        std::cout << "collision:";
        for (const auto& q : v.collision->first) std::cout << " " << to_string(q);
        std::cout << " vs";
        for (const auto& q : v.collision->second) std::cout << " " << to_string(q);
        std::cout << "\n";
    }
    std::cout << "search nodes: " << v.examined << " (bound " << search_tree_bound(layer.input_dim()) << ")\n";
}
