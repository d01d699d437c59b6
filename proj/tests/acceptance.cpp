#include <chrono>
#include <cstdio>
#include <functional>
#include <optional>
#include <string>

#include "support.hpp"

using namespace wzt;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// ||phi||_2^2 from 2-d Simpson of the closed-form kernels (Plancherel), computed offline
constexpr double kExpNorm2 = 1.841935755270206;
constexpr double kPhi2Norm2 = 3.351554338684923;

struct Result {
    bool pass = false;
    std::string detail;
};

char buf[512];

template <class... A>
std::string fmt(const char* f, A... a) {
    std::snprintf(buf, sizeof buf, f, a...);
    return buf;
}

cplx example31(double xi, double xp, double eta) {
    double m = std::floor(eta - xi);
    double s = (xi + m + eta) / 2;
    return std::polar(1.0, pi * s) * sinc(s) * std::polar(1.0, -2 * pi * m * xp);
}

// phi2 at N = 512 on [0,1)^2, built explicitly as the composition of two exponential kernels
struct Phi2 {
    SampledKernel K;
    ZakField Z;
    BracketTable B;
    double seconds = 0;
    Phi2() {
        auto t0 = Clock::now();
        auto E = weyl_kernel(GeneratorSpec::exp_kernel(), unit_window(512));
        K = kernel_compose(E, E);
        Z = zak_forward(K, zak_opts(0, 8));
        B = bracket_self(Z);
        seconds = seconds_since(t0);
    }
};

// indicator on a window wide enough that its sinc^2 tail stays below 1e-4
struct WideIndicator {
    double hs = 0, zn = 0, tail = 0;
    BracketTable B;
    WideIndicator() {
        auto K = weyl_kernel(GeneratorSpec::indicator_box(), KernelWindow::standard(1501, 1500, 8, 1));
        hs = hs_norm(K);
        auto Z = zak_forward(K, zak_opts(1501, 3003));
        tail = Z.discarded_mass;
        zn = zak_norm(Z);
        B = bracket_self(Z);
    }
};

Grid2n indicator_oracle_grid() {
    auto ax = Axis::left(-4, 5, 16);
    return sample_function(GeneratorSpec::indicator_box(), ax, ax);
}

Result criterion1() {
    auto t0 = Clock::now();
    auto w = KernelWindow::standard(16, 8, 64, 64);
    w.force_quadrature = true;
    w.quad_nodes = 10000;
    auto K = weyl_kernel(GeneratorSpec::indicator_box(), w);
    auto Z = zak_forward(K, zak_opts(16, 64));
    double secs = seconds_since(t0);
    const auto& P = Z.plane();
    double err = 0;
    for (std::size_t i = 0; i < P.xi.count; ++i)
        for (std::size_t q = 0; q < P.xi_prime.count; ++q)
            for (std::size_t j = 0; j < P.eta.count; ++j)
                err = std::max(err, std::abs(P.at(i, q, j) - example31(P.xi.node(i), P.xi_prime.node(q), P.eta.node(j))));
    bool grid = P.xi.count == 64 && P.xi_prime.count == 64 && P.eta.count == 1024;
    return {err < 1e-6 && secs < 10 && grid,
            fmt("max node error %.3g on %zux%zux%zu nodes, %.2f s", err, P.xi.count, P.xi_prime.count, P.eta.count, secs)};
}

Result criterion2(const Phi2& p) {
    auto t0 = Clock::now();
    double lo = INFINITY, hi = 0;
    for (double v : real_values(p.B)) lo = std::min(lo, v), hi = std::max(hi, v);
    auto r = riesz_bounds(p.B);
    double secs = p.seconds + seconds_since(t0);
    bool ok = lo >= 1 - 1e-3 && hi <= e2 + 1e-3 && r.verdict == Verdict::riesz_sequence && secs < 30;
    return {ok, fmt("bracket in [%.6f, %.6f], verdict %s, %.2f s", lo, hi, verdict_name(r.verdict).c_str(), secs)};
}

Result criterion3(const WideIndicator& w) {
    double dev = 0;
    for (double v : real_values(w.B)) dev = std::max(dev, std::abs(v - 1));
    auto G = gram_matrix(indicator_oracle_grid(), 3);
    double off = 0;
    for (long i = 0; i < G.G.rows(); ++i)
        for (long j = 0; j < G.G.cols(); ++j)
            if (i != j) off = std::max(off, std::abs(G.G(i, j)));
    bool ortho = orthonormality_check(w.B, 1e-3);
    return {dev <= 1e-3 && off <= 1e-10 && ortho,
            fmt("max |[phi,phi]-1| %.3g, Gram off-diagonal %.3g (R=3), orthonormality_check %s", dev, off,
                ortho ? "true" : "false")};
}

Result criterion4(const WideIndicator& w, const Phi2& p) {
    auto ri = cross_validate(gram_matrix(indicator_oracle_grid(), 3), w.B, 1e-4);
    auto Ke = weyl_kernel(GeneratorSpec::exp_kernel(), unit_window(512));
    auto Be = bracket_self(zak_forward(Ke, zak_opts(0, 8)));
    auto re = cross_validate(gram_matrix(pad(kernel_to_function(Ke), 4), 3), Be, 1e-4);
    auto rp = cross_validate(gram_matrix(pad(kernel_to_function(p.K), 4), 3), p.B, 1e-4);
    bool ok = ri.max_deviation < 1e-4 && re.max_deviation < 1e-4 && rp.max_deviation < 1e-4;
    return {ok, fmt("max |G - coeff| over |k|,|l|<=3: indicator %.3g, exp %.3g, phi2 %.3g", ri.max_deviation,
                    re.max_deviation, rp.max_deviation)};
}

Result criterion5(const WideIndicator& w, const Phi2& p) {
    auto Ke = weyl_kernel(GeneratorSpec::exp_kernel(), unit_window(512));
    double he = hs_norm(Ke), ze = zak_norm(zak_forward(Ke, zak_opts(0, 8)));
    double hp = hs_norm(p.K), zp = zak_norm(p.Z);
    double ne = std::sqrt(kExpNorm2), np = std::sqrt(kPhi2Norm2);
    double worst = std::max({std::abs(w.hs - 1), std::abs(w.zn - 1), std::abs(he - ne), std::abs(ze - ne),
                             std::abs(hp - np), std::abs(zp - np)});
    return {worst < 1e-4, fmt("indicator hs %.8f zak %.8f (tail %.2g); exp hs %.7f zak %.7f vs %.7f; phi2 hs %.7f "
                              "zak %.7f vs %.7f; worst %.3g",
                              w.hs, w.zn, w.tail, he, ze, ne, hp, zp, np, worst)};
}

Result criterion6() {
    std::mt19937_64 rng(606);
    auto K = weyl_kernel(GeneratorSpec::indicator_box(), KernelWindow::standard(14, 6, 16, 16));
    auto Z = zak_forward(K, zak_opts(14, 32));
    double e32 = 0;
    for (int t = 0; t < 20; ++t) {
        auto p = random_point(rng, 3);
        auto a = zak_forward(kernel_twisted_translate(K, p), zak_opts(14, 32));
        e32 = std::max(e32, max_diff(a.plane().values, zak_translate(Z, p).plane().values));
    }
    auto H = zak_pi_h_forward(K, zak_opts(26, 64));
    double e71 = 0;
    for (int t = 0; t < 20; ++t) {
        auto p = random_point(rng, 2);
        auto a = zak_pi_h_forward(kernel_twisted_translate(K, LatticePoint::of(2 * p.k[0], p.l[0])), zak_opts(26, 64));
        e71 = std::max(e71, max_diff(a.plane().values, zak_pi_h_translate(H, p).plane().values));
    }
    return {e32 < 1e-9 && e71 < 1e-9, fmt("standard law max error %.3g, half-lattice law max error %.3g (20 points each)", e32, e71)};
}

Result criterion7(const Phi2& p) {
    auto O = orthonormalize(p.Z, p.B);
    double od = 0;
    for (double v : real_values(bracket_self(O))) od = std::max(od, std::abs(v - 1));
    auto D = dualize(p.Z, p.B);
    const BracketTable X = bracket(D, p.Z);
    double dd = 0;
    for (const auto& v : X.plane().values) dd = std::max(dd, std::abs(v - 1.0));
    return {od <= 1e-10 && dd <= 1e-4, fmt("orthonormalized bracket dev %.3g, biorthogonal bracket dev %.3g", od, dd)};
}

Result criterion8(const Phi2& p) {
    auto one = a2_constant(constant_table(1.0, 64, 64));
    auto r = a2_constant(p.B);
    auto z = a2_constant(bracket_self(zero_band(p.Z, 0.5, 1.0)));
    bool ok = one.C == 1.0 && one.schauder && std::isfinite(r.C) && r.C <= e2 && r.flat && r.schauder && z.diverging &&
              !z.schauder;
    return {ok, fmt("constant C=%.17g; phi2 C=%.6f flat=%d schauder=%d; zeroed band diverging=%d schauder=%d", one.C, r.C,
                    r.flat, r.schauder, z.diverging, z.schauder)};
}

Result criterion9(const Phi2& p) {
    auto G = gram_matrix(pad(kernel_to_function(p.K), 4), 3);
    std::string trace;
    bool ok = true;
    double A = INFINITY, B = 0;
    for (int R = 1; R <= 3; ++R) {
        auto b = gram_bounds(gram_section(G, R));
        ok = ok && b.A <= A && b.B >= B && b.A >= 1 - 0.05 && b.B <= e2 + 0.05;
        A = b.A, B = b.B;
        trace += fmt(" R=%d [%.6f, %.6f]", R, b.A, b.B);
    }
    return {ok, "finite sections" + trace};
}

void report(int n, const char* name, const std::function<Result()>& f, int& failed) {
    Result r;
    try {
        r = f();
    } catch (const std::exception& e) {
        r = {false, std::string("error: ") + e.what()};
    }
    if (!r.pass) ++failed;
    std::printf("criterion %d %s: %s (%s)\n", n, r.pass ? "PASS" : "FAIL", name, r.detail.c_str());
    std::fflush(stdout);
}

}  // namespace

int main() {
    int failed = 0;
    report(1, "indicator Zak closed form", criterion1, failed);
    Phi2 p;
    report(2, "phi2 Riesz verdict", [&] { return criterion2(p); }, failed);
    {
        std::optional<WideIndicator> w;
        try {
            w.emplace();
        } catch (...) {
        }
        auto need = [&](auto f) {
            return [&, f]() -> Result {
                if (!w) return {false, "wide indicator window could not be computed"};
                return f(*w);
            };
        };
        report(3, "indicator orthonormality", need([](const WideIndicator& x) { return criterion3(x); }), failed);
        report(4, "Gram-bracket bridge", need([&](const WideIndicator& x) { return criterion4(x, p); }), failed);
        report(5, "isometry suite", need([&](const WideIndicator& x) { return criterion5(x, p); }), failed);
    }
    report(6, "modulation laws", criterion6, failed);
    report(7, "dual and orthonormalization", [&] { return criterion7(p); }, failed);
    report(8, "A2 estimator", [&] { return criterion8(p); }, failed);
    report(9, "finite-section convergence", [&] { return criterion9(p); }, failed);
    std::printf("%d of 9 criteria passed\n", 9 - failed);
    return failed == 0 ? 0 : 1;
}
