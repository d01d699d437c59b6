#include <doctest.h>

#include "support.hpp"

using namespace wzt;

namespace {

ZakField banded(long n = 64) { return zero_band(phi2_zak(n, 8), 0.5, 1.0); }

}  // namespace

TEST_SUITE("frame") {

TEST_CASE("constant tables") {
    auto B = constant_table(2.5);
    auto r = riesz_bounds(B);
    CHECK(r.A == 2.5);
    CHECK(r.B == 2.5);
    CHECK(r.verdict == Verdict::riesz_sequence);
    CHECK_FALSE(orthonormality_check(B, 1e-3));

    auto one = constant_table(1.0);
    CHECK(orthonormality_check(one, 1e-3));
    CHECK(riesz_bounds(one).verdict == Verdict::orthonormal_system);
    CHECK(frame_bounds(one).verdict == Verdict::orthonormal_system);

    auto zero = constant_table(0.0);
    try {
        frame_bounds(zero);
        FAIL("expected zero generator");
    } catch (const Error& e) {
        CHECK(e.status() == Status::zero_generator);
    }
    CHECK_THROWS_AS(riesz_bounds(zero), Error);
}

TEST_CASE("phi2 is a Riesz sequence with bounds inside [1, e^2]") {
    auto B = bracket_self(phi2_zak(256, 8));
    auto r = riesz_bounds(B);
    auto f = frame_bounds(B);
    CHECK(r.verdict == Verdict::riesz_sequence);
    CHECK(f.verdict == Verdict::riesz_sequence);
    CHECK(r.stable);
    CHECK(r.refinement_ok);
    CHECK(r.support_fraction == 1.0);
    CHECK(r.A >= 1.0);
    CHECK(r.B <= e2);
    // grid minimum/maximum sit at the first/last xi node
    CHECK(std::abs(r.A - phi2_bracket(0.5 / 256)) < 1e-4);
    CHECK(std::abs(r.B - phi2_bracket(1 - 0.5 / 256)) < 1e-4);
    CHECK_FALSE(orthonormality_check(B, 1e-3));
    CHECK(r.sensitivity.size() == 2);
}

TEST_CASE("zeroed band: frame on the support, not Riesz") {
    auto B = bracket_self(banded());
    auto f = frame_bounds(B);
    auto r = riesz_bounds(B);
    CHECK(f.verdict == Verdict::frame_sequence);
    CHECK(f.A > 1.0);
    CHECK(std::abs(f.support_fraction - 0.5) < 1e-12);
    CHECK(r.verdict == Verdict::not_frame);
    CHECK(r.A == 0.0);
}

TEST_CASE("verdicts that flip under threshold changes are inconclusive") {
    auto B = constant_table(1.0, 16, 16);
    for (std::size_t i = 0; i < 40; ++i) B.factors.front().values[i] = 1e-8;
    auto f = frame_bounds(B);
    CHECK(f.verdict == Verdict::inconclusive);
    CHECK_FALSE(f.stable);
}

TEST_CASE("duals") {
    auto Z = phi2_zak(128, 8);
    auto B = bracket_self(Z);
    auto rep = dual_existence(B);
    CHECK(rep.exists);
    auto D = dualize(Z, B);
    double dev = 0;
    for (double v : real_values(bracket(D, Z))) dev = std::max(dev, std::abs(v - 1));
    CHECK(dev < 1e-4);

    auto one = constant_table(1.0);
    CHECK(dual_existence(one).exists);

    auto Zb = banded();
    auto Bb = bracket_self(Zb);
    auto bad = dual_existence(Bb);
    CHECK_FALSE(bad.exists);
    CHECK(bad.integrals.size() == 3);
    CHECK(bad.growth > 2.0);
    try {
        dualize(Zb, Bb);
        FAIL("expected NoDualExists");
    } catch (const Error& e) {
        CHECK(e.status() == Status::no_dual);
    }
}

TEST_CASE("orthonormalization") {
    auto Z = phi2_zak(128, 8);
    auto B = bracket_self(Z);
    auto O = orthonormalize(Z, B);
    double dev = 0;
    for (double v : real_values(bracket_self(O))) dev = std::max(dev, std::abs(v - 1));
    CHECK(dev < 1e-10);

    ZakField Z2 = Z;
    for (auto& v : Z2.factors.front().values) v *= 2.0;
    auto O2 = orthonormalize(Z2, bracket_self(Z2));
    CHECK(max_diff(O2.plane().values, O.plane().values) < 1e-12);

    auto Zb = banded();
    try {
        orthonormalize(Zb, bracket_self(Zb));
        FAIL("expected not Riesz");
    } catch (const Error& e) {
        CHECK(e.status() == Status::not_riesz);
    }
}

TEST_CASE("membership") {
    KernelWindow w;
    w.xi = Axis::midpoints(-4, 5, 32);
    w.eta = Axis::midpoints(0, 1, 32);
    auto K = weyl_kernel(phi2_spec(), w);
    auto Z = zak_forward(K, zak_opts(4, 16));
    auto B = bracket_self(Z);
    const double norm = zak_norm(Z);

    auto self = membership_multiplier(Z, Z, B, 1e-9);
    CHECK(self.member);
    double dev = 0;
    for (const auto& v : self.r.plane().values) dev = std::max(dev, std::abs(v - 1.0));
    CHECK(dev < 1e-12);

    std::mt19937_64 rng(77);
    for (int t = 0; t < 5; ++t) {
        auto p = random_point(rng, 3);
        auto Zf = zak_forward(kernel_twisted_translate(K, p), zak_opts(4, 16));
        auto m = membership_multiplier(Zf, Z, B, 1e-9);
        CHECK(m.member);
        CHECK(m.residual < 1e-9);
        CHECK(std::abs(m.weighted_norm - norm) < 1e-9);
        const auto& R = m.r.plane();
        double err = 0;
        for (std::size_t i = 0; i < R.xi.count; ++i)
            for (std::size_t q = 0; q < R.xi_prime.count; ++q) {
                cplx E = std::polar(1.0, 2 * pi * (p.k[0] * R.xi.node(i) + p.l[0] * R.xi_prime.node(q))) *
                         ((p.k[0] * p.l[0]) % 2 ? -1.0 : 1.0);
                err = std::max(err, std::abs(R.at(i, q) - E));
            }
        CHECK(err < 1e-9);
    }

    auto lower = zero_band(Z, 0.5, 1.0), upper = zero_band(Z, 0.0, 0.5);
    auto m = membership_multiplier(upper, lower, bracket_self(lower), 1e-6);
    CHECK_FALSE(m.member);
    CHECK(std::abs(m.residual - 1.0) < 1e-12);
    CHECK(orthogonality_test(bracket(upper, lower), 1e-12));
}

TEST_CASE("A2 estimator") {
    auto one = a2_constant(constant_table(1.0, 64, 64));
    CHECK(one.C == 1.0);
    CHECK(one.schauder);

    auto B = bracket_self(phi2_zak(256, 8));
    auto r = a2_constant(B);
    auto rb = riesz_bounds(B);
    CHECK(r.C >= 1.0);
    CHECK(r.C <= e2);
    CHECK(r.C <= rb.B / rb.A + 1e-9);
    CHECK(r.flat);
    CHECK(r.schauder);
    for (std::size_t i = 1; i < r.level_trace.size(); ++i) CHECK(r.level_trace[i] >= r.level_trace[i - 1]);

    auto z = a2_constant(bracket_self(banded(256)));
    CHECK(z.diverging);
    CHECK_FALSE(z.schauder);

    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.1, 3.0);
    auto rnd = constant_table(1.0, 32, 32);
    for (auto& v : rnd.factors.front().values) v = u(rng);
    CHECK(a2_constant(rnd).C >= 1.0);
}

}
