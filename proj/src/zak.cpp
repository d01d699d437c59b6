#include "weylzak/zak.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fft.hpp"
#include "weylzak/parallel.hpp"

namespace wz {

constexpr double pi = std::numbers::pi;

const ZakPlane& ZakField::plane() const {
    if (factors.size() != 1) throw Error(Status::dimension_mismatch, "expected a 1-d Zak field");
    return factors.front();
}

long default_xi_prime(int M) {
    long n = 1;
    while (n < 2L * M + 1) n *= 2;
    return n;
}

double zak_norm(const ZakPlane& Z) {
    double s = 0.0;
    for (const cplx& v : Z.values) s += std::norm(v);
    return std::sqrt(s * Z.xi.step * Z.xi_prime.step * Z.eta.step);
}

double zak_norm(const ZakField& Z) {
    if (Z.factors.empty()) return 0.0;
    double r = 1.0;
    for (const auto& f : Z.factors) r *= zak_norm(f);
    return r;
}

namespace {

struct Layout {
    long N = 0;          // xi samples per unit
    long torus = 0;      // xi nodes on the torus
    long stride = 0;     // kernel rows per lattice step m
    long base = 0;       // kernel row of torus node 0, m = 0
    double t0 = 0.0;     // torus offset in [0, step)
};

Layout layout(const KernelPlane& K, ZakVariant variant, int xi_shift) {
    Layout L;
    L.N = K.xi.per_unit();
    if (variant == ZakVariant::half_lattice) {
        if (L.N % 2 != 0) throw Error(Status::commensurability, "half-lattice transform needs an even N_xi");
        L.torus = L.N / 2;
        L.stride = L.N / 2;
    } else {
        L.torus = L.N;
        L.stride = L.N;
    }
    const double step = K.xi.step;
    L.t0 = K.xi.lo - std::floor(K.xi.lo / step + 1e-9) * step;
    if (L.t0 >= step - 1e-12 * step) L.t0 = 0.0;
    L.base = std::lround((L.t0 + xi_shift - K.xi.lo) / step);
    return L;
}

ZakPlane forward_plane(const KernelPlane& K, const ZakOptions& o, ZakVariant variant, double& discarded) {
    const int M = o.M;
    if (M < 0) throw Error(Status::invalid_argument, "truncation radius must be >= 0");
    const long Np = o.n_xi_prime > 0 ? o.n_xi_prime : default_xi_prime(M);
    if (Np < 2L * M + 1)
        throw Error(Status::invalid_argument, "N_xi' = " + std::to_string(Np) + " is below 2M+1 = " +
                                                  std::to_string(2 * M + 1));
    const Layout L = layout(K, variant, variant == ZakVariant::standard ? o.xi_shift : 0);
    const long rows = static_cast<long>(K.xi.count);
    const long first = L.base - M * L.stride;
    const long last = L.base + (L.torus - 1) + M * L.stride;
    if (first < 0 || last >= rows)
        throw Error(Status::window, "kernel xi window " + describe(K.xi) + " does not cover the lattice sum |m| <= " +
                                        std::to_string(M));
    ZakPlane Z;
    Z.variant = variant;
    Z.M = M;
    Z.xi.lo = L.t0 + (variant == ZakVariant::standard ? o.xi_shift : 0);
    Z.xi.step = K.xi.step;
    Z.xi.count = static_cast<std::size_t>(L.torus);
    Z.xi_prime.lo = 0.0;
    Z.xi_prime.step = 1.0 / static_cast<double>(Np);
    Z.xi_prime.count = static_cast<std::size_t>(Np);
    Z.eta = K.eta;
    Z.values.assign(Z.xi.count * Z.xi_prime.count * Z.eta.count, cplx{});

    const std::size_t ne = K.eta.count;
    if (o.fast) {
        const detail::Dft dft(static_cast<std::size_t>(Np), -1);
        parallel_for(static_cast<std::size_t>(L.torus), [&](std::size_t j) {
            std::vector<cplx> a(static_cast<std::size_t>(Np)), out(static_cast<std::size_t>(Np));
            for (std::size_t e = 0; e < ne; ++e) {
                std::fill(a.begin(), a.end(), cplx{});
                for (long m = -M; m <= M; ++m) {
                    const long r = L.base + static_cast<long>(j) + m * L.stride;
                    a[static_cast<std::size_t>(((m % Np) + Np) % Np)] = K.at(static_cast<std::size_t>(r), e);
                }
                dft.run(a.data(), out.data());
                for (long q = 0; q < Np; ++q) Z.at(j, static_cast<std::size_t>(q), e) = out[static_cast<std::size_t>(q)];
            }
        });
    } else {
        std::vector<cplx> tw(static_cast<std::size_t>(Np));
        for (long t = 0; t < Np; ++t) tw[static_cast<std::size_t>(t)] = std::polar(1.0, -2.0 * pi * t / Np);
        parallel_for(static_cast<std::size_t>(L.torus), [&](std::size_t j) {
            for (long q = 0; q < Np; ++q)
                for (std::size_t e = 0; e < ne; ++e) {
                    cplx s{};
                    for (long m = -M; m <= M; ++m) {
                        const long r = L.base + static_cast<long>(j) + m * L.stride;
                        const long t = (((m % Np) + Np) % Np) * q % Np;
                        s += K.at(static_cast<std::size_t>(r), e) * tw[static_cast<std::size_t>(t)];
                    }
                    Z.at(j, static_cast<std::size_t>(q), e) = s;
                }
        });
    }

    double total = 0.0, used = 0.0;
    for (long r = 0; r < rows; ++r) {
        double m = 0.0;
        for (std::size_t e = 0; e < ne; ++e) m += std::norm(K.at(static_cast<std::size_t>(r), e));
        total += m;
        const long off = r - L.base;
        const long lo = -static_cast<long>(M) * L.stride;
        const long hi = static_cast<long>(M) * L.stride + L.torus;
        if (off >= lo && off < hi) used += m;
    }
    discarded = total > 0.0 ? (total - used) / total : 0.0;
    return Z;
}

ZakField forward(const SampledKernel& K, const ZakOptions& o, ZakVariant variant) {
    ZakField Z;
    double keep = 1.0 - std::min(1.0, K.tail_mass);
    for (const auto& f : K.factors) {
        double d = 0.0;
        Z.factors.push_back(forward_plane(f, o, variant, d));
        keep *= 1.0 - d;
    }
    Z.discarded_mass = 1.0 - keep;
    Z.provenance = std::string(variant == ZakVariant::standard ? "zak" : "zak_pi_h") + "(" + K.provenance + ")";
    return Z;
}

}  // namespace

ZakField zak_forward(const SampledKernel& K, const ZakOptions& options) {
    return forward(K, options, ZakVariant::standard);
}

ZakField zak_pi_h_forward(const SampledKernel& K, const ZakOptions& options) {
    return forward(K, options, ZakVariant::half_lattice);
}

SampledKernel zak_inverse(const ZakField& Zf, bool fast) {
    SampledKernel K;
    K.provenance = "zak_inverse(" + Zf.provenance + ")";
    double edge = 0.0;
    for (const auto& Z : Zf.factors) {
        const long Np = static_cast<long>(Z.xi_prime.count);
        const int M = Z.M;
        if (Np < 2L * M + 1) throw Error(Status::invalid_argument, "Zak field violates N_xi' >= 2M+1");
        const long torus = static_cast<long>(Z.xi.count);
        const long stride = torus;
        const double unit = Z.variant == ZakVariant::half_lattice ? 0.5 : 1.0;
        KernelPlane P;
        P.xi.step = Z.xi.step;
        P.xi.lo = Z.xi.lo - M * unit;
        P.xi.count = static_cast<std::size_t>((2 * M + 1) * stride);
        P.eta = Z.eta;
        P.values.assign(P.xi.count * P.eta.count, cplx{});
        const std::size_t ne = Z.eta.count;
        const double inv = 1.0 / static_cast<double>(Np);
        if (fast) {
            const detail::Dft dft(static_cast<std::size_t>(Np), +1);
            parallel_for(static_cast<std::size_t>(torus), [&](std::size_t j) {
                std::vector<cplx> a(static_cast<std::size_t>(Np)), out(static_cast<std::size_t>(Np));
                for (std::size_t e = 0; e < ne; ++e) {
                    for (long q = 0; q < Np; ++q) a[static_cast<std::size_t>(q)] = Z.at(j, static_cast<std::size_t>(q), e);
                    dft.run(a.data(), out.data());
                    for (long m = -M; m <= M; ++m) {
                        const std::size_t r = static_cast<std::size_t>((m + M) * stride + static_cast<long>(j));
                        P.at(r, e) = out[static_cast<std::size_t>(((m % Np) + Np) % Np)] * inv;
                    }
                }
            });
        } else {
            std::vector<cplx> tw(static_cast<std::size_t>(Np));
            for (long t = 0; t < Np; ++t) tw[static_cast<std::size_t>(t)] = std::polar(1.0, 2.0 * pi * t / Np);
            parallel_for(static_cast<std::size_t>(torus), [&](std::size_t j) {
                for (long m = -M; m <= M; ++m) {
                    const std::size_t r = static_cast<std::size_t>((m + M) * stride + static_cast<long>(j));
                    const long mm = ((m % Np) + Np) % Np;
                    for (std::size_t e = 0; e < ne; ++e) {
                        cplx s{};
                        for (long q = 0; q < Np; ++q) s += Z.at(j, static_cast<std::size_t>(q), e) * tw[static_cast<std::size_t>(mm * q % Np)];
                        P.at(r, e) = s * inv;
                    }
                }
            });
        }
        if (M >= 1) {
            // two outer rows per side: a single row can vanish by symmetry (e.g. a half-band mask kills even m)
            const std::size_t band = static_cast<std::size_t>(std::min(M, 2) * stride);
            double total = 0.0, outer = 0.0;
            for (std::size_t r = 0; r < P.xi.count; ++r) {
                double s = 0.0;
                for (std::size_t e = 0; e < ne; ++e) s += std::norm(P.at(r, e));
                total += s;
                if (r < band || r + band >= P.xi.count) outer += s;
            }
            if (total > 0.0) edge = std::max(edge, outer / total);
        }
        K.factors.push_back(std::move(P));
    }
    K.tail_mass = std::max(Zf.discarded_mass, edge);
    return K;
}

ZakField zak_translate(const ZakField& Z, const LatticePoint& p) {
    if (p.dim() != Z.dim()) throw Error(Status::dimension_mismatch, "lattice point dimension does not match Zak field");
    ZakField out = Z;
    for (std::size_t f = 0; f < Z.dim(); ++f) {
        ZakPlane& P = out.factors[f];
        const double k = static_cast<double>(p.k[f]), l = static_cast<double>(p.l[f]);
        const double sign = ((p.k[f] * p.l[f]) % 2 == 0) ? 1.0 : -1.0;
        for (std::size_t i = 0; i < P.xi.count; ++i)
            for (std::size_t q = 0; q < P.xi_prime.count; ++q) {
                const cplx E = sign * std::polar(1.0, 2.0 * pi * (k * P.xi.node(i) + l * P.xi_prime.node(q)));
                for (std::size_t e = 0; e < P.eta.count; ++e) P.at(i, q, e) *= E;
            }
    }
    out.provenance = Z.provenance + "|translate";
    return out;
}

ZakField zak_pi_h_translate(const ZakField& Z, const LatticePoint& half) {
    if (half.dim() != Z.dim()) throw Error(Status::dimension_mismatch, "lattice point dimension does not match Zak field");
    ZakField out = Z;
    for (std::size_t f = 0; f < Z.dim(); ++f) {
        ZakPlane& P = out.factors[f];
        if (P.variant != ZakVariant::half_lattice)
            throw Error(Status::invalid_argument, "zak_pi_h_translate needs a half-lattice Zak field");
        const double k = static_cast<double>(half.k[f]), l = static_cast<double>(half.l[f]);
        for (std::size_t i = 0; i < P.xi.count; ++i)
            for (std::size_t q = 0; q < P.xi_prime.count; ++q) {
                const cplx E = std::polar(1.0, 4.0 * pi * (k * P.xi.node(i) + l * P.xi_prime.node(q)));
                for (std::size_t e = 0; e < P.eta.count; ++e) P.at(i, q, e) *= E;
            }
    }
    out.provenance = Z.provenance + "|translate_pi_h";
    return out;
}

}  // namespace wz
