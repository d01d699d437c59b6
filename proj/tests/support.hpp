#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "weylzak/frame.hpp"
#include "weylzak/gram.hpp"

namespace wzt {

using namespace wz;
constexpr double pi = std::numbers::pi;
constexpr double e2 = 7.38905609893065;

inline GeneratorSpec phi2_spec() {
    return GeneratorSpec::twisted_convolution(GeneratorSpec::exp_kernel(), GeneratorSpec::exp_kernel());
}

inline KernelWindow unit_window(long n) {
    KernelWindow w;
    w.xi = Axis::midpoints(0, 1, n);
    w.eta = Axis::midpoints(0, 1, n);
    return w;
}

inline ZakOptions zak_opts(int M, long np, bool fast = true) {
    ZakOptions o;
    o.M = M;
    o.n_xi_prime = np;
    o.fast = fast;
    return o;
}

// (e^s - 1)/s, the phi2 kernel on [0,1)^2 as a function of s = xi + eta
inline double phi2_kernel(double s) { return std::abs(s) < 1e-12 ? 1.0 : std::expm1(s) / s; }

// Simpson in eta of ((e^{xi+eta}-1)/(xi+eta))^2
inline double phi2_bracket(double xi) {
    const int n = 2000;
    double h = 1.0 / n, s = 0;
    for (int i = 0; i <= n; ++i) {
        double f = phi2_kernel(xi + i * h);
        f *= f;
        s += (i == 0 || i == n) ? f : (i % 2 ? 4 * f : 2 * f);
    }
    return s * h / 3;
}

inline double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    if (a.size() != b.size()) return INFINITY;
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double max_abs(const std::vector<cplx>& a) {
    double m = 0;
    for (const auto& v : a) m = std::max(m, std::abs(v));
    return m;
}

inline ZakField zero_band(ZakField Z, double lo, double hi) {
    for (auto& P : Z.factors)
        for (std::size_t q = 0; q < P.xi_prime.count; ++q) {
            double v = P.xi_prime.node(q);
            if (v < lo || v >= hi) continue;
            for (std::size_t i = 0; i < P.xi.count; ++i)
                for (std::size_t j = 0; j < P.eta.count; ++j) P.at(i, q, j) = 0;
        }
    return Z;
}

inline BracketTable constant_table(double c, long nxi = 16, long np = 16) {
    BracketTable B;
    BracketPlane P;
    P.xi = Axis::midpoints(0, 1, nxi);
    P.xi_prime = Axis{0.0, 1.0 / static_cast<double>(np), static_cast<std::size_t>(np)};
    P.values.assign(static_cast<std::size_t>(nxi * np), cplx(c, 0));
    B.factors.push_back(P);
    B.self = true;
    B.eta_step = 1.0 / 16;
    B.eta_count = 16;
    B.input_scale = c;
    return B;
}

inline LatticePoint random_point(std::mt19937_64& rng, int r, std::size_t n = 1) {
    std::uniform_int_distribution<long> d(-r, r);
    LatticePoint p{std::vector<long>(n), std::vector<long>(n)};
    for (std::size_t i = 0; i < n; ++i) p.k[i] = d(rng), p.l[i] = d(rng);
    return p;
}

inline Grid2n random_grid(std::mt19937_64& rng, const Axis& x, const Axis& y, double lo, double hi) {
    std::normal_distribution<double> nd;
    FunctionPlane P{x, y, std::vector<cplx>(x.count * y.count)};
    for (std::size_t i = 0; i < x.count; ++i)
        for (std::size_t j = 0; j < y.count; ++j) {
            double a = x.node(i), b = y.node(j);
            if (a >= lo && a < hi && b >= lo && b < hi) P.at(i, j) = cplx(nd(rng), nd(rng));
        }
    Grid2n g;
    g.factors.push_back(std::move(P));
    return g;
}

// ZakField for phi2 on [0,1)^2 with M = 0, shared by several suites
inline ZakField phi2_zak(long n = 128, long np = 8) {
    return zak_forward(weyl_kernel(phi2_spec(), unit_window(n)), zak_opts(0, np));
}

}  // namespace wzt
