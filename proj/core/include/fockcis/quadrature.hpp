#pragma once

#include <vector>

namespace fockcis
{

/// n-point Gauss-Legendre rule on [-1, 1], nodes ascending.
struct GaussLegendreRule
{
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Nodes by Newton iteration on P_n from Chebyshev starting guesses. n >= 1.
GaussLegendreRule gauss_legendre(int n);

} // namespace fockcis
