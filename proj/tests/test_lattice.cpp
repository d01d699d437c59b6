#include <doctest.h>

#include "support.hpp"

using namespace wzt;

TEST_SUITE("lattice") {

TEST_CASE("cocycle examples") {
    CHECK(cocycle(LatticePoint::of(0, 0), LatticePoint::of(3, 5)) == cplx(1, 0));
    CHECK(cocycle(LatticePoint::of(1, 0), LatticePoint::of(0, 1)) == cplx(-1, 0));
    CHECK_THROWS_AS(cocycle(LatticePoint::of(1, 0), LatticePoint({1, 2}, {0, 0})), Error);
}

TEST_CASE("cocycle antisymmetry on random pairs") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 100; ++t) {
        auto p = random_point(rng, 50, 2), q = random_point(rng, 50, 2);
        CHECK(cocycle(p, q) * cocycle(q, p) == cplx(1, 0));
        CHECK(cocycle(p, q) == std::conj(cocycle(q, p)));
        CHECK(std::abs(cocycle(p, q)) == 1.0);
    }
}

TEST_CASE("twisted translate of the indicator by (1,0)") {
    auto ax = Axis::left(-2, 4, 8);
    Grid2n g = sample_function(GeneratorSpec::indicator_box(), ax, ax);
    auto t = twisted_translate(g, LatticePoint::of(1, 0));
    const auto& P = t.plane();
    double err = 0;
    for (std::size_t i = 0; i < ax.count; ++i)
        for (std::size_t j = 0; j < ax.count; ++j) {
            double x = ax.node(i), y = ax.node(j);
            cplx want = (x >= 1 && x < 2 && y >= 0 && y < 1) ? std::polar(1.0, -pi * y) : cplx{};
            err = std::max(err, std::abs(P.at(i, j) - want));
        }
    CHECK(err < 1e-15);
    CHECK(twisted_translate(g, LatticePoint::of(0, 0)).plane().values == g.plane().values);
}

TEST_CASE("twisted translation is unitary and obeys the composition law") {
    std::mt19937_64 rng(5);
    auto ax = Axis::left(-6, 7, 4);
    for (int t = 0; t < 20; ++t) {
        Grid2n g = random_grid(rng, ax, ax, -1, 2);
        auto p = random_point(rng, 2), q = random_point(rng, 2);
        CHECK(std::abs(l2_norm(twisted_translate(g, p)) - l2_norm(g)) <= 1e-14 * l2_norm(g));
        auto lhs = twisted_translate(twisted_translate(g, q), p);
        auto rhs = twisted_translate(g, p + q);
        const cplx c = cocycle(p, q);
        double err = 0;
        for (std::size_t i = 0; i < rhs.plane().values.size(); ++i)
            err = std::max(err, std::abs(lhs.plane().values[i] - c * rhs.plane().values[i]));
        CHECK(err < 1e-12);
    }
}

TEST_CASE("non-commensurate steps are rejected") {
    FunctionPlane P{Axis{0, 0.3, 10}, Axis{0, 0.3, 10}, std::vector<cplx>(100, 1.0)};
    try {
        twisted_translate(P, 1, 0);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.status() == Status::commensurability);
    }
}

TEST_CASE("materialized evaluators match the closed forms") {
    auto ind = materialize(GeneratorSpec::indicator_box());
    auto ex = materialize(GeneratorSpec::exp_kernel());
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int t = 0; t < 100; ++t) {
        double a = u(rng), b = u(rng);
        double s = (a + b) / 2;
        cplx want = (b - a >= 0 && b - a < 1) ? std::polar(1.0, pi * s) * (std::sin(pi * s) / (pi * s)) : cplx{};
        CHECK(std::abs(ind.kernel({a}, {b}) - want) < 1e-14);
        cplx we = (a >= 0 && a < 1 && b >= 0 && b < 1) ? cplx(std::exp(a * b)) : cplx{};
        CHECK(std::abs(ex.kernel({a}, {b}) - we) < 1e-14);
    }
    CHECK(ind.kernel({0.0}, {0.0}) == cplx(1, 0));
    CHECK(std::abs(ex.kernel({0.5}, {0.5}) - std::exp(0.25)) < 1e-15);

    auto sep = materialize(GeneratorSpec::separable({GeneratorSpec::indicator_box(), GeneratorSpec::indicator_box()}));
    for (int t = 0; t < 50; ++t) {
        double a1 = u(rng), a2 = u(rng), b1 = u(rng), b2 = u(rng);
        CHECK(std::abs(sep.kernel({a1, a2}, {b1, b2}) - ind.kernel({a1}, {b1}) * ind.kernel({a2}, {b2})) < 1e-14);
        CHECK(std::abs(sep.function({a1, a2}, {b1, b2}) - ind.function({a1}, {b1}) * ind.function({a2}, {b2})) < 1e-14);
    }
}

TEST_CASE("sinc is the normalized convention") {
    CHECK(sinc(0) == 1.0);
    CHECK(std::abs(sinc(1)) < 1e-16);
    CHECK(std::abs(sinc(0.5) - 2 / pi) < 1e-15);
    // The midpoint rule with n nodes returns exact * (a h/2) / sin(a h/2) for e^{iax} on [0,1).
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-4, 4);
    const int n = 10000;
    const double h = 1.0 / n;
    for (int t = 0; t < 200; ++t) {
        double tt = u(rng), xi = tt - 0.25, eta = tt + 0.25;
        double a = pi * (xi + eta);
        cplx q{};
        for (int i = 0; i < n; ++i) q += std::polar(1.0, a * (i + 0.5) * h);
        q *= h;
        cplx k = indicator_kernel(xi, eta);
        double bias = (a * h / 2) / std::sin(a * h / 2);
        if (std::abs(a) < 1e-12) bias = 1;
        CHECK(std::abs(q - k * bias) < 1e-12);
    }
}

TEST_CASE("generator specs round-trip through JSON") {
    auto s = GeneratorSpec::separable({GeneratorSpec::indicator_box(), GeneratorSpec::exp_kernel()});
    auto r = GeneratorSpec::from_json(s.to_json());
    CHECK(r.to_json() == s.to_json());
    CHECK(materialize(r).dim() == 2);
    auto c = GeneratorSpec::from_json(R"({"kind":"twisted_convolution","factors":[{"kind":"exp_kernel"},{"kind":"exp_kernel"}]})");
    CHECK(c.kind == GeneratorSpec::Kind::twisted_convolution);

    auto status_of = [](const char* j) {
        try {
            GeneratorSpec::from_json(j);
        } catch (const Error& e) {
            return e.status();
        }
        return Status::ok;
    };
    CHECK(status_of(R"({"kind":"hat"})") == Status::parse);
    CHECK(status_of("{not json") == Status::parse);
    CHECK(status_of(R"({"kind":"separable","n":3,"factors":[{"kind":"exp_kernel"}]})") == Status::dimension_mismatch);
    CHECK(status_of(R"({"kind":"indicator_box","n":2})") == Status::dimension_mismatch);
}

}
