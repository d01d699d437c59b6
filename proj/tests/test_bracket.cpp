#include <doctest.h>

#include "support.hpp"

using namespace wzt;

namespace {

ZakField exp_zak(long n = 128, long np = 8) {
    return zak_forward(weyl_kernel(GeneratorSpec::exp_kernel(), unit_window(n)), zak_opts(0, np));
}

ZakField indicator_zak() {
    auto K = weyl_kernel(GeneratorSpec::indicator_box(), KernelWindow::standard(10, 8, 8, 8));
    return zak_forward(K, zak_opts(10, 32));
}

}  // namespace

TEST_SUITE("bracket") {

TEST_CASE("phi2 bracket against the closed form") {
    auto B = bracket_self(phi2_zak(256, 8));
    const auto& P = B.plane();
    double err = 0, lo = INFINITY, hi = 0;
    for (std::size_t i = 0; i < P.xi.count; ++i) {
        double want = phi2_bracket(P.xi.node(i));
        for (std::size_t q = 0; q < P.xi_prime.count; ++q) {
            double v = P.at(i, q).real();
            err = std::max(err, std::abs(v - want));
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    CHECK(err < 1e-4);
    CHECK(lo >= 1.0);
    CHECK(hi <= e2);
    CHECK(B.self);
}

TEST_CASE("indicator bracket is one up to the reported tail") {
    auto dev = [](long H) {
        auto K = weyl_kernel(GeneratorSpec::indicator_box(), KernelWindow::standard(H + 2, H, 8, 8));
        auto Z = zak_forward(K, zak_opts(H + 2, 2 * H + 6));
        double d = 0;
        for (double v : real_values(bracket_self(Z))) d = std::max(d, std::abs(v - 1));
        CHECK(d < 2 * Z.discarded_mass);
        return d;
    };
    // the deficit is the sinc^2 mass beyond |eta| = H, which halves when H doubles
    double d8 = dev(8), d16 = dev(16);
    CHECK(d8 / d16 == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("zero partner gives the zero table") {
    auto Z = phi2_zak(32, 8);
    ZakField Z0 = Z;
    for (auto& v : Z0.factors.front().values) v = 0;
    auto B = bracket(Z, Z0);
    CHECK(max_abs(B.plane().values) == 0.0);
    CHECK(orthogonality_test(B, 1e-12));
    CHECK_FALSE(orthogonality_test(bracket_self(Z), 1e-3));
}

TEST_CASE("Fourier coefficients of constant tables") {
    auto B = constant_table(1.0, 16, 16);
    CHECK(std::abs(bracket_fourier_coeff(B, LatticePoint::of(0, 0)) - 1.0) < 1e-15);
    for (long k = -3; k <= 3; ++k)
        for (long l = -3; l <= 3; ++l)
            if (k || l) CHECK(std::abs(bracket_fourier_coeff(B, LatticePoint::of(k, l))) < 1e-15);
    try {
        bracket_fourier_coeff(B, LatticePoint::of(8, 0));
        FAIL("expected a Nyquist error");
    } catch (const Error& e) {
        CHECK(e.status() == Status::nyquist);
    }
}

TEST_CASE("indicator coefficients: norm and orthogonality") {
    auto B = bracket_self(indicator_zak());
    CHECK(std::abs(bracket_fourier_coeff(B, LatticePoint::of(0, 0)) - 1.0) < 0.02);
    CHECK(std::abs(bracket_fourier_coeff(B, LatticePoint::of(1, 1))) < 1e-4);
}

TEST_CASE("bracket translation identities, two paths") {
    auto Z1 = exp_zak(64, 8), Z2 = phi2_zak(64, 8);
    auto B = bracket(Z1, Z2);
    std::mt19937_64 rng(41);
    for (int t = 0; t < 20; ++t) {
        auto p = random_point(rng, 3);
        auto L = bracket_translate_left(B, p);
        auto R = bracket_translate_right(B, p);
        CHECK(max_diff(L.plane().values, bracket(zak_translate(Z1, p), Z2).plane().values) < 1e-9);
        CHECK(max_diff(R.plane().values, bracket(Z1, zak_translate(Z2, p)).plane().values) < 1e-9);
        CHECK(max_diff(R.plane().values, bracket_translate_left(B, -p).plane().values) < 1e-12);
        double m = 0;
        for (std::size_t i = 0; i < B.plane().values.size(); ++i)
            m = std::max(m, std::abs(std::abs(L.plane().values[i]) - std::abs(B.plane().values[i])));
        CHECK(m < 1e-14);
    }
    CHECK(bracket_translate_left(B, LatticePoint::of(0, 0)).plane().values == B.plane().values);
    CHECK(bracket_translate_right(B, LatticePoint::of(0, 0)).plane().values == B.plane().values);
}

TEST_CASE("a translate is not orthogonal to its generator") {
    auto Z = indicator_zak();
    auto T = zak_translate(Z, LatticePoint::of(1, 0));
    auto B = bracket(Z, T);
    auto S = bracket_self(Z);
    double m = 0;
    for (std::size_t i = 0; i < B.plane().values.size(); ++i)
        m = std::max(m, std::abs(std::abs(B.plane().values[i]) - S.plane().values[i].real()));
    CHECK(m < 1e-12);
    CHECK_FALSE(orthogonality_test(B, 1e-3));
}

TEST_CASE("Cauchy-Schwarz, L1 bound, Hermitian symmetry, sesquilinearity") {
    auto Z1 = exp_zak(64, 8), Z2 = phi2_zak(64, 8);
    auto B12 = bracket(Z1, Z2), B21 = bracket(Z2, Z1);
    auto B11 = bracket_self(Z1), B22 = bracket_self(Z2);
    double slack = INFINITY, l1 = 0;
    const auto& P = B12.plane();
    for (std::size_t i = 0; i < P.values.size(); ++i) {
        slack = std::min(slack, B11.plane().values[i].real() * B22.plane().values[i].real() - std::norm(P.values[i]));
        CHECK(std::abs(P.values[i] - std::conj(B21.plane().values[i])) < 1e-15 * (1 + std::abs(P.values[i])));
        l1 += std::abs(P.values[i]);
    }
    l1 *= P.xi.step * P.xi_prime.step;
    CHECK(slack >= -1e-10);
    CHECK(l1 <= zak_norm(Z1) * zak_norm(Z2) + 1e-5);

    const cplx a(0.3, -1.2), b(2.0, 0.5);
    ZakField C = Z1;
    auto& cv = C.factors.front().values;
    for (std::size_t i = 0; i < cv.size(); ++i) cv[i] = a * Z1.plane().values[i] + b * Z2.plane().values[i];
    auto lhs = bracket(C, Z2);
    double err = 0;
    for (std::size_t i = 0; i < P.values.size(); ++i)
        err = std::max(err, std::abs(lhs.plane().values[i] - (a * P.values[i] + b * B22.plane().values[i])));
    CHECK(err < 1e-12);
}

TEST_CASE("Bessel inequality on the truncated character set") {
    auto Z = indicator_zak();
    auto B = bracket_self(Z);
    double sum = 0;
    for (long k = -3; k <= 3; ++k)
        for (long l = -3; l <= 3; ++l) sum += std::norm(bracket_fourier_coeff(B, LatticePoint::of(k, l)));
    double l2 = 0;
    for (double v : real_values(B)) l2 += v * v;
    l2 *= B.plane().xi.step * B.plane().xi_prime.step;
    CHECK(sum <= l2 + 1e-12);

    auto B2 = bracket_self(phi2_zak(64, 8));
    sum = 0;
    for (long k = -3; k <= 3; ++k)
        for (long l = -3; l <= 3; ++l) sum += std::norm(bracket_fourier_coeff(B2, LatticePoint::of(k, l)));
    l2 = 0;
    for (double v : real_values(B2)) l2 += v * v;
    l2 *= B2.plane().xi.step * B2.plane().xi_prime.step;
    CHECK(sum <= l2 + 1e-12);
}

TEST_CASE("grid mismatch and corrupted tables") {
    CHECK_THROWS_AS(bracket(phi2_zak(32, 8), phi2_zak(64, 8)), Error);
    auto B = constant_table(1.0);
    B.self = false;
    B.factors.front().values[3] = cplx(1, 0.5);
    try {
        real_values(B);
        FAIL("expected corruption");
    } catch (const Error& e) {
        CHECK(e.status() == Status::corrupted);
    }
    B.factors.front().values[3] = cplx(-1e-3, 0);
    CHECK_THROWS_AS(real_values(B), Error);
    B.factors.front().values[3] = cplx(-1e-14, 1e-12);
    CHECK(real_values(B)[3] == 0.0);
}

TEST_CASE("summary") {
    auto B = bracket_self(phi2_zak(64, 8));
    auto s = summarize(B);
    CHECK(s.min >= 1.0);
    CHECK(s.max <= e2);
    CHECK(s.below_threshold_fraction == 0.0);
    CHECK(s.l1 > s.min);
}

}
