#include "weylzak/bracket.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "weylzak/parallel.hpp"

namespace wz {

constexpr double pi = std::numbers::pi;

const BracketPlane& BracketTable::plane() const {
    if (factors.size() != 1) throw Error(Status::dimension_mismatch, "expected a 1-d bracket table");
    return factors.front();
}

namespace {

void check_match(const ZakField& a, const ZakField& b) {
    if (a.dim() != b.dim()) throw Error(Status::dimension_mismatch, "Zak fields of different dimension");
    for (std::size_t f = 0; f < a.dim(); ++f) {
        const ZakPlane &p = a.factors[f], &q = b.factors[f];
        if (!p.xi.same_as(q.xi) || !p.xi_prime.same_as(q.xi_prime) || !p.eta.same_as(q.eta) || p.variant != q.variant)
            throw Error(Status::grid_mismatch, "bracket needs Zak fields on identical grids");
    }
}

template <class F>
BracketTable build(const ZakField& Z1, F&& node) {
    BracketTable B;
    for (const auto& P : Z1.factors) {
        BracketPlane out{P.xi, P.xi_prime, P.variant, std::vector<cplx>(P.xi.count * P.xi_prime.count)};
        const std::size_t f = B.factors.size();
        parallel_for(P.xi.count, [&](std::size_t i) {
            for (std::size_t q = 0; q < P.xi_prime.count; ++q) out.at(i, q) = node(f, i, q) * P.eta.step;
        });
        B.factors.push_back(std::move(out));
    }
    B.eta_step = Z1.factors.front().eta.step;
    B.eta_count = Z1.factors.front().eta.count;
    return B;
}

}  // namespace

BracketTable bracket(const ZakField& Z1, const ZakField& Z2) {
    if (&Z1 == &Z2) return bracket_self(Z1);
    check_match(Z1, Z2);
    BracketTable B = build(Z1, [&](std::size_t f, std::size_t i, std::size_t q) {
        const ZakPlane &a = Z1.factors[f], &b = Z2.factors[f];
        const std::size_t base = a.index(i, q, 0);
        cplx s{};
        for (std::size_t e = 0; e < a.eta.count; ++e) s += a.values[base + e] * std::conj(b.values[base + e]);
        return s;
    });
    B.input_scale = zak_norm(Z1) * zak_norm(Z2);
    return B;
}

BracketTable bracket_self(const ZakField& Z) {
    if (Z.factors.empty()) throw Error(Status::invalid_argument, "empty Zak field");
    BracketTable B = build(Z, [&](std::size_t f, std::size_t i, std::size_t q) {
        const ZakPlane& a = Z.factors[f];
        const std::size_t base = a.index(i, q, 0);
        double s = 0.0;
        for (std::size_t e = 0; e < a.eta.count; ++e) s += std::norm(a.values[base + e]);
        return cplx(s, 0.0);
    });
    B.self = true;
    const double n = zak_norm(Z);
    B.input_scale = n * n;
    return B;
}

std::vector<double> real_values(const BracketPlane& B) {
    double scale = 0.0;
    for (const cplx& v : B.values) scale = std::max(scale, std::abs(v));
    const double tol = 1e-10 * std::max(1.0, scale);
    std::vector<double> out(B.values.size());
    for (std::size_t i = 0; i < B.values.size(); ++i) {
        const cplx v = B.values[i];
        if (std::abs(v.imag()) > tol)
            throw Error(Status::corrupted, "bracket has imaginary part " + std::to_string(v.imag()) +
                                               "; expected a real self-bracket");
        if (v.real() < -1e-12 * std::max(1.0, scale))
            throw Error(Status::corrupted, "self-bracket has negative value " + std::to_string(v.real()));
        out[i] = std::max(0.0, v.real());
    }
    return out;
}

namespace {

constexpr std::size_t product_cap = 50'000'000;

std::vector<double> outer(const std::vector<std::vector<double>>& parts) {
    std::size_t total = 1;
    for (const auto& p : parts) {
        if (p.empty()) return {};
        if (total > product_cap / p.size())
            throw Error(Status::invalid_argument, "separable table too large to scan node-wise");
        total *= p.size();
    }
    std::vector<double> out{1.0};
    for (const auto& p : parts) {
        std::vector<double> next;
        next.reserve(out.size() * p.size());
        for (double a : out)
            for (double b : p) next.push_back(a * b);
        out.swap(next);
    }
    return out;
}

}  // namespace

std::vector<double> real_values(const BracketTable& B) {
    std::vector<std::vector<double>> parts;
    for (const auto& f : B.factors) parts.push_back(real_values(f));
    return outer(parts);
}

cplx bracket_fourier_coeff(const BracketTable& B, const LatticePoint& p) {
    if (p.dim() != B.dim()) throw Error(Status::dimension_mismatch, "lattice point dimension does not match table");
    cplx r(1.0, 0.0);
    for (std::size_t f = 0; f < B.dim(); ++f) {
        const BracketPlane& P = B.factors[f];
        if (P.variant != ZakVariant::standard)
            throw Error(Status::invalid_argument, "Fourier coefficients are defined for standard tables only");
        const long k = p.k[f], l = p.l[f];
        if (2 * std::abs(k) >= static_cast<long>(P.xi.count) || 2 * std::abs(l) >= static_cast<long>(P.xi_prime.count))
            throw Error(Status::nyquist, "(k,l)=(" + std::to_string(k) + "," + std::to_string(l) +
                                             ") exceeds the Nyquist limit of the table");
        std::vector<cplx> ex(P.xi.count), eq(P.xi_prime.count);
        for (std::size_t i = 0; i < P.xi.count; ++i) ex[i] = std::polar(1.0, -2.0 * pi * k * P.xi.node(i));
        for (std::size_t q = 0; q < P.xi_prime.count; ++q) eq[q] = std::polar(1.0, -2.0 * pi * l * P.xi_prime.node(q));
        cplx s{};
        for (std::size_t i = 0; i < P.xi.count; ++i) {
            cplx row{};
            for (std::size_t q = 0; q < P.xi_prime.count; ++q) row += P.at(i, q) * eq[q];
            s += row * ex[i];
        }
        const double sign = ((k * l) % 2 == 0) ? 1.0 : -1.0;
        r *= s * (P.xi.step * P.xi_prime.step * sign);
    }
    return r;
}

namespace {

BracketTable modulate(const BracketTable& B, const LatticePoint& p, double direction) {
    if (p.dim() != B.dim()) throw Error(Status::dimension_mismatch, "lattice point dimension does not match table");
    BracketTable out = B;
    out.self = B.self && p.is_zero();
    for (std::size_t f = 0; f < B.dim(); ++f) {
        BracketPlane& P = out.factors[f];
        const double k = static_cast<double>(p.k[f]), l = static_cast<double>(p.l[f]);
        const double sign = ((p.k[f] * p.l[f]) % 2 == 0) ? 1.0 : -1.0;
        for (std::size_t i = 0; i < P.xi.count; ++i)
            for (std::size_t q = 0; q < P.xi_prime.count; ++q)
                P.at(i, q) *= sign * std::polar(1.0, direction * 2.0 * pi * (k * P.xi.node(i) + l * P.xi_prime.node(q)));
    }
    return out;
}

}  // namespace

BracketTable bracket_translate_left(const BracketTable& B, const LatticePoint& p) { return modulate(B, p, +1.0); }
BracketTable bracket_translate_right(const BracketTable& B, const LatticePoint& p) { return modulate(B, p, -1.0); }

bool orthogonality_test(const BracketTable& B, double tol) {
    double m = 1.0;
    for (const auto& f : B.factors) {
        double mf = 0.0;
        for (const cplx& v : f.values) mf = std::max(mf, std::abs(v));
        m *= mf;
    }
    return m <= tol * B.input_scale;
}

BracketSummary summarize(const BracketTable& B, double tau_rel) {
    std::vector<std::vector<double>> parts;
    for (const auto& f : B.factors) {
        if (B.self) {
            parts.push_back(real_values(f));
        } else {
            std::vector<double> a(f.values.size());
            for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::abs(f.values[i]);
            parts.push_back(std::move(a));
        }
    }
    const std::vector<double> v = outer(parts);
    BracketSummary s;
    if (v.empty()) return s;
    const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
    s.min = *mn;
    s.max = *mx;
    auto decode = [&](std::size_t flat) {
        std::vector<std::size_t> idx(2 * B.dim());
        for (std::size_t f = B.dim(); f-- > 0;) {
            const std::size_t nq = B.factors[f].xi_prime.count, size = B.factors[f].values.size();
            const std::size_t local = flat % size;
            flat /= size;
            idx[2 * f] = local / nq;
            idx[2 * f + 1] = local % nq;
        }
        return idx;
    };
    s.argmin = decode(static_cast<std::size_t>(mn - v.begin()));
    s.argmax = decode(static_cast<std::size_t>(mx - v.begin()));
    double cell = 1.0;
    for (const auto& f : B.factors) cell *= f.xi.step * f.xi_prime.step;
    double l1 = 0.0;
    std::size_t below = 0;
    s.threshold = tau_rel * s.max;
    for (double x : v) {
        l1 += x;
        if (x <= s.threshold) ++below;
    }
    s.l1 = l1 * cell;
    s.below_threshold_fraction = static_cast<double>(below) / static_cast<double>(v.size());
    return s;
}

}  // namespace wz
