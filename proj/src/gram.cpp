#include "weylzak/gram.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "weylzak/parallel.hpp"

namespace wz {

constexpr double pi = std::numbers::pi;

long GramMatrix::index_of(const LatticePoint& p) const {
    for (std::size_t i = 0; i < points.size(); ++i)
        if (points[i] == p) return static_cast<long>(i);
    return -1;
}

std::vector<LatticePoint> lattice_box(std::size_t n, int R) {
    if (n == 0 || R < 0) throw Error(Status::invalid_argument, "lattice box needs n >= 1 and R >= 0");
    std::vector<std::pair<long, long>> one;
    for (long k = -R; k <= R; ++k)
        for (long l = -R; l <= R; ++l) one.emplace_back(k, l);
    std::vector<LatticePoint> out;
    std::size_t total = 1;
    for (std::size_t f = 0; f < n; ++f) total *= one.size();
    out.reserve(total);
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::vector<long> k(n), l(n);
        std::size_t rest = idx;
        for (std::size_t f = n; f-- > 0;) {
            const auto& kl = one[rest % one.size()];
            rest /= one.size();
            k[f] = kl.first;
            l[f] = kl.second;
        }
        out.emplace_back(std::move(k), std::move(l));
    }
    return out;
}

namespace {

struct Support {
    long x0, x1, y0, y1;  // half-open index box of nonzero samples
    bool empty() const { return x1 <= x0 || y1 <= y0; }
};

Support support_of(const FunctionPlane& g) {
    Support s{static_cast<long>(g.x.count), 0, static_cast<long>(g.y.count), 0};
    for (std::size_t i = 0; i < g.x.count; ++i)
        for (std::size_t j = 0; j < g.y.count; ++j)
            if (g.at(i, j) != cplx{}) {
                s.x0 = std::min(s.x0, static_cast<long>(i));
                s.x1 = std::max(s.x1, static_cast<long>(i) + 1);
                s.y0 = std::min(s.y0, static_cast<long>(j));
                s.y1 = std::max(s.y1, static_cast<long>(j) + 1);
            }
    return s;
}

Eigen::MatrixXcd factor_gram(const FunctionPlane& g, int R) {
    const long nx = g.x.per_unit(), ny = g.y.per_unit();
    const Support s = support_of(g);
    const auto pts = lattice_box(1, R);
    const std::size_t P = pts.size();
    Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(P), static_cast<Eigen::Index>(P));
    if (s.empty()) return G;
    const long cx = static_cast<long>(g.x.count), cy = static_cast<long>(g.y.count);
    if (s.x0 - R * nx < 0 || s.x1 + R * nx > cx || s.y0 - R * ny < 0 || s.y1 + R * ny > cy)
        throw Error(Status::padding, "lattice box R=" + std::to_string(R) +
                                         " exceeds the grid padding; pad the function by at least R units");
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t a = 0; a < P; ++a)
        for (std::size_t b = a; b < P; ++b) pairs.emplace_back(a, b);
    std::vector<cplx> val(pairs.size());
    parallel_for(pairs.size(), [&](std::size_t t) {
        const auto [a, b] = pairs[t];
        const long kp = pts[a].k[0], lp = pts[a].l[0], kq = pts[b].k[0], lq = pts[b].l[0];
        const long dx = (kp - kq) * nx, dy = (lp - lq) * ny;
        // sum over (i, j) of g[i, j] conj(g[i + dx, j + dy]) with both in the support
        const long i0 = std::max(s.x0, s.x0 - dx), i1 = std::min(s.x1, s.x1 - dx);
        const long j0 = std::max(s.y0, s.y0 - dy), j1 = std::min(s.y1, s.y1 - dy);
        if (i1 <= i0 || j1 <= j0) return;
        const double dl = static_cast<double>(lp - lq), dk = static_cast<double>(kp - kq);
        std::vector<cplx> py(static_cast<std::size_t>(j1 - j0));
        for (long j = j0; j < j1; ++j)
            py[static_cast<std::size_t>(j - j0)] =
                std::polar(1.0, -pi * (g.y.node(static_cast<std::size_t>(j)) + static_cast<double>(lp)) * dk);
        cplx acc{};
        for (long i = i0; i < i1; ++i) {
            cplx row{};
            const cplx* r1 = &g.values[static_cast<std::size_t>(i) * g.y.count];
            const cplx* r2 = &g.values[static_cast<std::size_t>(i + dx) * g.y.count];
            for (long j = j0; j < j1; ++j)
                row += py[static_cast<std::size_t>(j - j0)] * r1[j] * std::conj(r2[j + dy]);
            acc += row * std::polar(1.0, pi * (g.x.node(static_cast<std::size_t>(i)) + static_cast<double>(kp)) * dl);
        }
        val[t] = acc * (g.x.step * g.y.step);
    });
    for (std::size_t t = 0; t < pairs.size(); ++t) {
        const auto [a, b] = pairs[t];
        const auto ia = static_cast<Eigen::Index>(a), ib = static_cast<Eigen::Index>(b);
        if (a == b) {
            G(ia, ib) = cplx(val[t].real(), 0.0);
        } else {
            G(ia, ib) = val[t];
            G(ib, ia) = std::conj(val[t]);
        }
    }
    return G;
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B) {
    Eigen::MatrixXcd K(A.rows() * B.rows(), A.cols() * B.cols());
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        for (Eigen::Index j = 0; j < A.cols(); ++j) K.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
    return K;
}

}  // namespace

GramMatrix gram_matrix(const Grid2n& g, int R) {
    if (g.dim() == 0) throw Error(Status::invalid_argument, "empty function grid");
    if (R < 0) throw Error(Status::invalid_argument, "box radius must be >= 0");
    GramMatrix out;
    out.R = R;
    out.points = lattice_box(g.dim(), R);
    out.provenance = "gram(" + g.provenance + ")";
    Eigen::MatrixXcd G = factor_gram(g.factors[0], R);
    for (std::size_t f = 1; f < g.dim(); ++f) G = kron(G, factor_gram(g.factors[f], R));
    out.G = std::move(G);
    return out;
}

GramMatrix gram_section(const GramMatrix& G, int R) {
    if (R > G.R || R < 0) throw Error(Status::invalid_argument, "section radius outside the Gram box");
    GramMatrix out;
    out.R = R;
    out.provenance = G.provenance;
    out.points = lattice_box(G.dim(), R);
    std::vector<Eigen::Index> idx;
    for (const auto& p : out.points) idx.push_back(G.index_of(p));
    const auto n = static_cast<Eigen::Index>(idx.size());
    out.G.resize(n, n);
    for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = 0; b < n; ++b) out.G(a, b) = G.G(idx[a], idx[b]);
    return out;
}

GramBounds gram_bounds(const GramMatrix& G) {
    GramBounds b;
    if (G.G.size() == 0) return b;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G.G, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw Error(Status::internal, "eigensolver failed");
    const auto& ev = es.eigenvalues();
    const double lo = ev.minCoeff(), hi = ev.maxCoeff();
    const double norm = std::max(std::abs(lo), std::abs(hi));
    if (lo < -1e-9 * norm)
        throw Error(Status::corrupted, "Gram matrix is not positive semidefinite (min eigenvalue " + std::to_string(lo) + ")");
    b.min_eigenvalue = lo;
    b.A = std::max(lo, 0.0);
    b.B = hi;
    return b;
}

CrossReport cross_validate(const GramMatrix& G, const BracketTable& B, double tol) {
    CrossReport r;
    const long origin = G.index_of(LatticePoint::zero(G.dim()));
    if (origin < 0) throw Error(Status::invalid_argument, "Gram box does not contain the origin");
    r.worst = LatticePoint::zero(G.dim());
    for (std::size_t i = 0; i < G.points.size(); ++i) {
        const cplx gv = G.G(origin, static_cast<Eigen::Index>(i));
        const cplx bv = bracket_fourier_coeff(B, G.points[i]);
        r.entries.push_back({G.points[i], gv, bv});
        const double d = std::abs(gv - bv);
        if (d > r.max_deviation) {
            r.max_deviation = d;
            r.worst = G.points[i];
        }
    }
    r.entries_pass = r.max_deviation <= tol;
    r.gram = gram_bounds(G);
    const std::vector<double> v = real_values(B);
    if (!v.empty()) {
        r.A_bracket = *std::min_element(v.begin(), v.end());
        r.B_bracket = *std::max_element(v.begin(), v.end());
    }
    r.bounds_pass = r.gram.A <= r.B_bracket * 1.05 + 1e-12 && r.gram.B >= r.A_bracket * 0.95 - 1e-12;
    r.pass = r.entries_pass && r.bounds_pass;
    return r;
}

}  // namespace wz
