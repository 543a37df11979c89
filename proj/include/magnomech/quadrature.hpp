#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "magnomech/errors.hpp"

namespace magnomech {

/// Composite 8-point Gauss-Legendre quadrature on [a, b].
namespace quadrature {

inline constexpr std::array<double, 4> gl8_nodes = {
    0.1834346424956498, 0.5255324099163290, 0.7966664774136267, 0.9602898564975363};
inline constexpr std::array<double, 4> gl8_weights = {
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

inline constexpr int points_per_panel = 8;

template <class F>
auto integrate(F&& f, double a, double b, int panels) -> decltype(f(0.0)) {
    if (panels < 1) throw InvalidArgumentError("quadrature needs at least one panel");
    using R = decltype(f(0.0));
    R total{};
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * h;
        const double half = 0.5 * h;
        for (int q = 0; q < 4; ++q) {
            const double x = half * gl8_nodes[q];
            total += gl8_weights[q] * (f(mid + x) + f(mid - x)) * half;
        }
    }
    return total;
}

inline int panels_for_nodes(int nodes) {
    if (nodes < points_per_panel) throw InvalidArgumentError("node count too small");
    return (nodes + points_per_panel - 1) / points_per_panel;
}

/// Nodes and weights of the composite rule, for callers that sweep many
/// integrands over the same grid.
inline void nodes_weights(double a, double b, int panels, std::vector<double>& x,
                          std::vector<double>& w) {
    if (panels < 1) throw InvalidArgumentError("quadrature needs at least one panel");
    x.clear();
    w.clear();
    x.reserve(8 * panels);
    w.reserve(8 * panels);
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * h;
        const double half = 0.5 * h;
        for (int q = 3; q >= 0; --q) {
            x.push_back(mid - half * gl8_nodes[q]);
            w.push_back(gl8_weights[q] * half);
        }
        for (int q = 0; q < 4; ++q) {
            x.push_back(mid + half * gl8_nodes[q]);
            w.push_back(gl8_weights[q] * half);
        }
    }
}

} // namespace quadrature

} // namespace magnomech
