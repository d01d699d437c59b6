#include <doctest.h>

#include "support.hpp"

using namespace wzt;

TEST_SUITE("separable") {

TEST_CASE("n = 2 products factor through every stage") {
    auto spec = GeneratorSpec::separable({phi2_spec(), GeneratorSpec::exp_kernel()});
    auto K = weyl_kernel(spec, unit_window(64));
    REQUIRE(K.dim() == 2);
    auto K1 = weyl_kernel(phi2_spec(), unit_window(64));
    auto K2 = weyl_kernel(GeneratorSpec::exp_kernel(), unit_window(64));
    CHECK(std::abs(hs_norm(K) - hs_norm(K1) * hs_norm(K2)) < 1e-12);

    auto Z = zak_forward(K, zak_opts(0, 8));
    CHECK(std::abs(zak_norm(Z) - hs_norm(K)) < 1e-12);
    auto B = bracket_self(Z);
    auto B1 = bracket_self(zak_forward(K1, zak_opts(0, 8)));
    auto B2 = bracket_self(zak_forward(K2, zak_opts(0, 8)));
    auto r = riesz_bounds(B);
    auto r1 = riesz_bounds(B1), r2 = riesz_bounds(B2);
    CHECK(r.verdict == Verdict::riesz_sequence);
    CHECK(std::abs(r.A - r1.A * r2.A) < 1e-12 * r.A);
    CHECK(std::abs(r.B - r1.B * r2.B) < 1e-12 * r.B);
    CHECK_THROWS_AS(a2_constant(B), Error);

    auto p = LatticePoint({1, -2}, {0, 3});
    auto c = bracket_fourier_coeff(B, p);
    auto c1 = bracket_fourier_coeff(B1, LatticePoint::of(1, 0));
    auto c2 = bracket_fourier_coeff(B2, LatticePoint::of(-2, 3));
    CHECK(std::abs(c - c1 * c2) < 1e-12);
}

TEST_CASE("n = 2 modulation law and translation algebra") {
    KernelWindow w;
    w.xi = Axis::midpoints(-3, 4, 16);
    w.eta = Axis::midpoints(0, 1, 16);
    auto spec = GeneratorSpec::separable({GeneratorSpec::exp_kernel(), phi2_spec()});
    auto K = weyl_kernel(spec, w);
    auto Z = zak_forward(K, zak_opts(3, 8));
    std::mt19937_64 rng(51);
    for (int t = 0; t < 10; ++t) {
        auto p = random_point(rng, 2, 2);
        auto a = zak_forward(kernel_twisted_translate(K, p), zak_opts(3, 8));
        auto b = zak_translate(Z, p);
        double err = 0;
        for (std::size_t f = 0; f < 2; ++f) err = std::max(err, max_diff(a.factors[f].values, b.factors[f].values));
        CHECK(err < 1e-9);
    }
    CHECK_THROWS_AS(zak_translate(Z, LatticePoint::of(1, 1)), Error);
}

TEST_CASE("n = 2 Gram oracle is a tensor product") {
    auto ax = Axis::left(-2, 3, 4);
    auto spec = GeneratorSpec::separable({GeneratorSpec::indicator_box(), GeneratorSpec::indicator_box()});
    auto g = sample_function(spec, ax, ax);
    REQUIRE(g.dim() == 2);
    auto G = gram_matrix(g, 1);
    CHECK(G.G.rows() == 81);
    CHECK((G.G - Eigen::MatrixXcd::Identity(81, 81)).cwiseAbs().maxCoeff() < 1e-12);

    std::mt19937_64 rng(3);
    auto a = random_grid(rng, ax, ax, -0.5, 1.5), b = random_grid(rng, ax, ax, -0.5, 1.5);
    Grid2n ab;
    ab.factors = {a.plane(), b.plane()};
    auto Gab = gram_bounds(gram_matrix(ab, 1));
    auto Ga = gram_bounds(gram_matrix(a, 1)), Gb = gram_bounds(gram_matrix(b, 1));
    CHECK(std::abs(Gab.A - Ga.A * Gb.A) < 1e-9 * Gab.B);
    CHECK(std::abs(Gab.B - Ga.B * Gb.B) < 1e-9 * Gab.B);
}

}
