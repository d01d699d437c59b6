#include <doctest.h>

#include "support.hpp"

using namespace wzt;

// Literal form of the sinc convention property: 200 random t in [-4,4], 10^4 midpoint nodes, < 1e-8.
TEST_CASE("sinc convention against 10^4-node midpoint quadrature") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-4, 4);
    const int n = 10000;
    const double h = 1.0 / n;
    double worst = 0;
    for (int t = 0; t < 200; ++t) {
        double tt = u(rng), xi = tt - 0.25, eta = tt + 0.25;
        cplx q{};
        for (int i = 0; i < n; ++i) q += std::polar(1.0, pi * (xi + eta) * (i + 0.5) * h);
        q *= h;
        worst = std::max(worst, std::abs(q - indicator_kernel(xi, eta)));
    }
    MESSAGE("worst deviation " << worst);
    CHECK(worst < 1e-8);
}
