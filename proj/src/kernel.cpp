#include "weylzak/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "fft.hpp"
#include "weylzak/parallel.hpp"

namespace wz {

constexpr double pi = std::numbers::pi;

const KernelPlane& SampledKernel::plane() const {
    if (factors.size() != 1) throw Error(Status::dimension_mismatch, "expected a 1-d kernel");
    return factors.front();
}

KernelWindow KernelWindow::standard(int M, double H, long xi_per_unit, long eta_per_unit) {
    if (M < 0 || !(H > 0)) throw Error(Status::invalid_argument, "truncation radius and eta window must be positive");
    KernelWindow w;
    w.xi = Axis::midpoints(-(M + 1.0), M + 2.0, xi_per_unit);
    w.eta = Axis::midpoints(-H, H, eta_per_unit);
    return w;
}

double hs_norm(const KernelPlane& K) {
    double s = 0.0;
    for (const cplx& v : K.values) s += std::norm(v);
    return std::sqrt(s * K.xi.step * K.eta.step);
}

double hs_norm(const SampledKernel& K) {
    if (K.factors.empty()) return 0.0;
    double r = 1.0;
    for (const auto& f : K.factors) r *= hs_norm(f);
    return r;
}

double edge_mass(const KernelPlane& K) {
    const double bx = std::min<double>(static_cast<double>(K.xi.count), 1.0 / K.xi.step);
    const double by = std::min<double>(static_cast<double>(K.eta.count), 1.0 / K.eta.step);
    const auto ex = static_cast<std::size_t>(bx), ey = static_cast<std::size_t>(by);
    double total = 0.0, edge = 0.0;
    for (std::size_t i = 0; i < K.xi.count; ++i) {
        const bool row_edge = i < ex || i + ex >= K.xi.count;
        for (std::size_t j = 0; j < K.eta.count; ++j) {
            const double m = std::norm(K.at(i, j));
            total += m;
            if (row_edge || j < ey || j + ey >= K.eta.count) edge += m;
        }
    }
    return total > 0.0 ? edge / total : 0.0;
}

namespace {

void check_window(const KernelWindow& w) {
    w.xi.per_unit();
    w.eta.per_unit();
    if (w.xi.count == 0 || w.eta.count == 0) throw Error(Status::invalid_argument, "empty kernel window");
}

KernelPlane closed_form(const std::function<cplx(double, double)>& f, const Axis& xi, const Axis& eta) {
    KernelPlane K{xi, eta, std::vector<cplx>(xi.count * eta.count)};
    parallel_for(xi.count, [&](std::size_t i) {
        const double x = xi.node(i);
        for (std::size_t j = 0; j < eta.count; ++j) K.at(i, j) = f(x, eta.node(j));
    });
    return K;
}

// Estimated mass of a closed form outside the window, relative to the total.
// Samples a region three window-lengths wide on every side; rows are strided so the
// cost stays close to that of the window itself.
double closed_form_tail(const std::function<cplx(double, double)>& f, const Axis& xi, const Axis& eta,
                        double inside) {
    const double Lx = xi.hi() - xi.lo, Ly = eta.hi() - eta.lo;
    Axis bx = xi, by = eta;
    const auto ext_x = static_cast<std::size_t>(3.0 * Lx / xi.step + 0.5);
    const auto ext_y = static_cast<std::size_t>(3.0 * Ly / eta.step + 0.5);
    bx.lo -= static_cast<double>(ext_x) * xi.step;
    bx.count += 2 * ext_x;
    by.lo -= static_cast<double>(ext_y) * eta.step;
    by.count += 2 * ext_y;
    const std::size_t stride = std::max<std::size_t>(1, bx.count / 1024);
    const std::size_t nrows = (bx.count + stride - 1) / stride;
    std::vector<double> rows(nrows, 0.0);
    parallel_for(nrows, [&](std::size_t r) {
        const std::size_t i = r * stride;
        const bool in_x = i >= ext_x && i < ext_x + xi.count;
        double s = 0.0;
        for (std::size_t j = 0; j < by.count; ++j) {
            const bool in_y = j >= ext_y && j < ext_y + eta.count;
            if (in_x && in_y) continue;
            s += std::norm(f(bx.node(i), by.node(j)));
        }
        rows[r] = s;
    });
    double band = 0.0;
    for (double r : rows) band += r;
    band *= static_cast<double>(stride) * xi.step * eta.step;
    const double total = inside + band;
    return total > 0.0 ? band / total : 0.0;
}

// K(xi, eta) = sum_q g(x_q, eta - xi) e^{pi i x_q (xi + eta)} dx. `column` fills
// g(x_q, v) for all q and returns false when g(., v) vanishes identically.
KernelPlane quadrature(const Axis& xi, const Axis& eta, double x0, double dx, std::size_t nq,
                       const std::function<bool(double, std::vector<cplx>&)>& column) {
    KernelPlane K{xi, eta, std::vector<cplx>(xi.count * eta.count)};
    auto accumulate = [&](const std::vector<cplx>& gq, double s2) {
        const cplx z = std::polar(1.0, pi * dx * s2);
        cplx w = std::polar(dx, pi * x0 * s2);
        cplx acc{};
        for (std::size_t q = 0; q < nq; ++q) {
            acc += gq[q] * w;
            w *= z;
        }
        return acc;
    };
    const bool aligned = std::abs(xi.step - eta.step) <= 1e-15 &&
                         std::abs((eta.lo - xi.lo) / xi.step - std::nearbyint((eta.lo - xi.lo) / xi.step)) < 1e-9;
    if (aligned) {
        // One column of g per diagonal eta - xi = v.
        const long nxi = static_cast<long>(xi.count), neta = static_cast<long>(eta.count);
        const std::size_t ndiag = static_cast<std::size_t>(nxi + neta - 1);
        const double v0 = eta.lo - xi.lo;
        std::vector<std::vector<cplx>> cols(ndiag);
        parallel_for(ndiag, [&](std::size_t t) {
            const long d = static_cast<long>(t) - (nxi - 1);
            const double v = v0 + static_cast<double>(d) * xi.step;
            std::vector<cplx> gq(nq);
            if (column(v, gq)) cols[t] = std::move(gq);
        });
        parallel_for(xi.count, [&](std::size_t i) {
            for (std::size_t j = 0; j < eta.count; ++j) {
                const auto& gq = cols[j + xi.count - 1 - i];
                if (gq.empty()) continue;
                K.at(i, j) = accumulate(gq, xi.node(i) + eta.node(j));
            }
        });
    } else {
        parallel_for(xi.count, [&](std::size_t i) {
            std::vector<cplx> gq(nq);
            for (std::size_t j = 0; j < eta.count; ++j) {
                const double x = xi.node(i), e = eta.node(j);
                if (column(e - x, gq)) K.at(i, j) = accumulate(gq, x + e);
            }
        });
    }
    return K;
}

double boundary_fraction(const FunctionPlane& g) {
    double total = 0.0, edge = 0.0;
    for (std::size_t i = 0; i < g.x.count; ++i)
        for (std::size_t j = 0; j < g.y.count; ++j) {
            const double m = std::norm(g.at(i, j));
            total += m;
            if (i == 0 || j == 0 || i + 1 == g.x.count || j + 1 == g.y.count) edge += m;
        }
    return total > 0.0 ? edge / total : 0.0;
}

KernelPlane resample(const KernelPlane& src, const Axis& xi, const Axis& eta) {
    if (std::abs(src.xi.step - xi.step) > 1e-15 || std::abs(src.eta.step - eta.step) > 1e-15)
        throw Error(Status::grid_mismatch, "sampled kernel steps differ from the requested window");
    KernelPlane K{xi, eta, std::vector<cplx>(xi.count * eta.count)};
    for (std::size_t i = 0; i < xi.count; ++i) {
        const double x = xi.node(i);
        const long si = src.xi.index_of(x);
        if (si < 0) {
            if (x >= src.xi.lo && x < src.xi.hi())
                throw Error(Status::grid_mismatch, "window nodes are not nodes of the sampled kernel");
            continue;
        }
        for (std::size_t j = 0; j < eta.count; ++j) {
            const double e = eta.node(j);
            const long sj = src.eta.index_of(e);
            if (sj < 0) {
                if (e >= src.eta.lo && e < src.eta.hi())
                    throw Error(Status::grid_mismatch, "window nodes are not nodes of the sampled kernel");
                continue;
            }
            K.at(i, j) = src.at(si, sj);
        }
    }
    return K;
}

std::size_t default_nodes(const KernelWindow& w, double width) {
    if (w.quad_nodes > 0) return w.quad_nodes;
    const double smax = std::max({std::abs(w.xi.lo + w.eta.lo), std::abs(w.xi.hi() + w.eta.hi()), 1.0});
    const double cycles = 0.5 * smax * width;
    return std::max<std::size_t>(2000, static_cast<std::size_t>(std::ceil(8.0 * cycles)));
}

struct PlaneResult {
    KernelPlane K;
    double tail = 0.0;
    std::string path;
};

PlaneResult factor_kernel(const FactorModel& m, const KernelWindow& w) {
    PlaneResult r;
    if (m.kernel && !w.force_quadrature) {
        r.K = closed_form(m.kernel, w.xi, w.eta);
        double inside = 0.0;
        for (const cplx& v : r.K.values) inside += std::norm(v);
        r.tail = closed_form_tail(m.kernel, w.xi, w.eta, inside * w.xi.step * w.eta.step);
        r.path = "closed-form:" + kind_name(m.kind);
        return r;
    }
    if (m.function) {
        const std::size_t nq = default_nodes(w, m.x_hi - m.x_lo);
        const double dx = (m.x_hi - m.x_lo) / static_cast<double>(nq);
        const double x0 = m.x_lo + 0.5 * dx;
        r.K = quadrature(w.xi, w.eta, x0, dx, nq, [&](double v, std::vector<cplx>& gq) {
            if (v < m.y_lo || v >= m.y_hi) return false;
            bool any = false;
            for (std::size_t q = 0; q < nq; ++q) {
                gq[q] = m.function(x0 + static_cast<double>(q) * dx, v);
                any = any || gq[q] != cplx{};
            }
            return any;
        });
        r.tail = edge_mass(r.K);
        r.path = "quadrature:midpoint(" + std::to_string(nq) + "):" + kind_name(m.kind);
        return r;
    }
    if (m.sampled_function) {
        const FunctionPlane& g = *m.sampled_function;
        const double bf = boundary_fraction(g);
        if (bf > w.support_tol)
            throw Error(Status::window, "support of the sampled function reaches its grid boundary (boundary mass " +
                                            std::to_string(bf) + "); the x integral would be truncated");
        r.K = quadrature(w.xi, w.eta, g.x.lo, g.x.step, g.x.count, [&](double v, std::vector<cplx>& gq) {
            const long iy = g.y.index_of(v);
            if (iy < 0) {
                if (v >= g.y.lo && v < g.y.hi())
                    throw Error(Status::grid_mismatch, "eta - xi is not a node of the function's y grid");
                return false;
            }
            bool any = false;
            for (std::size_t q = 0; q < g.x.count; ++q) {
                gq[q] = g.at(q, static_cast<std::size_t>(iy));
                any = any || gq[q] != cplx{};
            }
            return any;
        });
        r.tail = edge_mass(r.K);
        r.path = "quadrature:sampled_function";
        return r;
    }
    if (m.sampled_kernel) {
        r.K = resample(*m.sampled_kernel, w.xi, w.eta);
        const double in = hs_norm(*m.sampled_kernel), out = hs_norm(r.K);
        const double lost = in > 0.0 ? std::max(0.0, 1.0 - (out * out) / (in * in)) : 0.0;
        r.tail = std::max(lost, edge_mass(r.K));
        r.path = "sampled_kernel";
        return r;
    }
    if (m.operands.size() == 2) {
        if (std::abs(w.xi.step - w.eta.step) > 1e-15)
            throw Error(Status::grid_mismatch, "twisted convolution needs equal xi and eta steps");
        KernelWindow wa = w, wb = w;
        wa.eta = w.eta;
        wb.xi = w.eta;
        const Materialized a = materialize(m.operands[0]);
        const Materialized b = materialize(m.operands[1]);
        PlaneResult ra = factor_kernel(a.factors.front(), wa);
        PlaneResult rb = factor_kernel(b.factors.front(), wb);
        r.K = kernel_compose(ra.K, rb.K);
        r.tail = ra.tail + rb.tail;
        r.path = "compose(" + ra.path + "," + rb.path + ")";
        return r;
    }
    throw Error(Status::invalid_argument, "generator factor cannot produce a kernel");
}

}  // namespace

SampledKernel weyl_kernel(const GeneratorSpec& spec, const KernelWindow& window) {
    check_window(window);
    const Materialized m = materialize(spec);
    SampledKernel K;
    double keep = 1.0;
    for (const auto& f : m.factors) {
        PlaneResult r = factor_kernel(f, window);
        keep *= 1.0 - std::min(1.0, r.tail);
        if (!K.provenance.empty()) K.provenance += " x ";
        K.provenance += r.path;
        K.factors.push_back(std::move(r.K));
    }
    K.tail_mass = 1.0 - keep;
    return K;
}

KernelPlane kernel_twisted_translate(const KernelPlane& K, long k, long l) {
    const long n = K.xi.per_unit();
    const long shift = l * n;
    const long rows = static_cast<long>(K.xi.count);
    double total = 0.0, lost = 0.0;
    for (long i = 0; i < rows; ++i) {
        double m = 0.0;
        for (std::size_t j = 0; j < K.eta.count; ++j) m += std::norm(K.at(i, j));
        total += m;
        const long dest = i - shift;
        if (dest < 0 || dest >= rows) lost += m;
    }
    if (lost > 1e-14 * total)
        throw Error(Status::window, "xi + l leaves the sampled window for (k,l)=(" + std::to_string(k) + "," +
                                        std::to_string(l) + "); relative mass lost " + std::to_string(lost / total));
    KernelPlane out{K.xi, K.eta, std::vector<cplx>(K.values.size())};
    for (long i = 0; i < rows; ++i) {
        const long src = i + shift;
        if (src < 0 || src >= rows) continue;
        const cplx phase = std::polar(1.0, pi * (2.0 * K.xi.node(i) + static_cast<double>(l)) * static_cast<double>(k));
        for (std::size_t j = 0; j < K.eta.count; ++j) out.at(i, j) = phase * K.at(src, j);
    }
    return out;
}

SampledKernel kernel_twisted_translate(const SampledKernel& K, const LatticePoint& p) {
    if (p.dim() != K.dim()) throw Error(Status::dimension_mismatch, "lattice point dimension does not match kernel");
    SampledKernel out = K;
    for (std::size_t f = 0; f < K.dim(); ++f) out.factors[f] = kernel_twisted_translate(K.factors[f], p.k[f], p.l[f]);
    out.provenance = K.provenance + "|twisted_translate";
    return out;
}

namespace {
struct Range {
    std::size_t lo = 0, hi = 0;
    bool empty() const { return hi <= lo; }
};

Range nonzero_rows(const KernelPlane& K) {
    Range r{K.xi.count, 0};
    for (std::size_t i = 0; i < K.xi.count; ++i)
        for (std::size_t j = 0; j < K.eta.count; ++j)
            if (K.at(i, j) != cplx{}) {
                r.lo = std::min(r.lo, i);
                r.hi = std::max(r.hi, i + 1);
                break;
            }
    return r;
}

Range nonzero_cols(const KernelPlane& K) {
    Range r{K.eta.count, 0};
    for (std::size_t i = 0; i < K.xi.count; ++i)
        for (std::size_t j = 0; j < K.eta.count; ++j)
            if (K.at(i, j) != cplx{}) {
                r.lo = std::min(r.lo, j);
                r.hi = std::max(r.hi, j + 1);
            }
    return r;
}
}  // namespace

KernelPlane kernel_compose(const KernelPlane& a, const KernelPlane& b) {
    if (!a.eta.same_as(b.xi))
        throw Error(Status::grid_mismatch, "kernel_compose needs the middle axes to match: " + describe(a.eta) +
                                               " vs " + describe(b.xi));
    KernelPlane out{a.xi, b.eta, std::vector<cplx>(a.xi.count * b.eta.count)};
    const Range ra = nonzero_rows(a), ca = nonzero_cols(a), rb = nonzero_rows(b), cb = nonzero_cols(b);
    const Range mid{std::max(ca.lo, rb.lo), std::min(ca.hi, rb.hi)};
    if (ra.empty() || cb.empty() || mid.empty()) return out;
    using RowMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    using Stride = Eigen::OuterStride<>;
    Eigen::Map<const RowMat, 0, Stride> A(a.values.data() + ra.lo * a.eta.count + mid.lo,
                                          static_cast<Eigen::Index>(ra.hi - ra.lo),
                                          static_cast<Eigen::Index>(mid.hi - mid.lo),
                                          Stride(static_cast<Eigen::Index>(a.eta.count)));
    Eigen::Map<const RowMat, 0, Stride> B(b.values.data() + mid.lo * b.eta.count + cb.lo,
                                          static_cast<Eigen::Index>(mid.hi - mid.lo),
                                          static_cast<Eigen::Index>(cb.hi - cb.lo),
                                          Stride(static_cast<Eigen::Index>(b.eta.count)));
    RowMat C = A * B;
    C *= a.eta.step;
    for (std::size_t i = ra.lo; i < ra.hi; ++i)
        for (std::size_t j = cb.lo; j < cb.hi; ++j) out.at(i, j) = C(i - ra.lo, j - cb.lo);
    return out;
}

SampledKernel kernel_compose(const SampledKernel& a, const SampledKernel& b) {
    if (a.dim() != b.dim()) throw Error(Status::dimension_mismatch, "kernel_compose on kernels of different n");
    SampledKernel out;
    for (std::size_t f = 0; f < a.dim(); ++f) out.factors.push_back(kernel_compose(a.factors[f], b.factors[f]));
    out.tail_mass = a.tail_mass + b.tail_mass;
    out.provenance = "compose(" + a.provenance + "," + b.provenance + ")";
    return out;
}

namespace {

FunctionPlane invert_plane(const KernelPlane& K, long x_per_unit) {
    const long N = K.xi.per_unit();
    if (K.eta.per_unit() != N) throw Error(Status::grid_mismatch, "kernel_to_function needs equal xi and eta steps");
    const double d0 = (K.eta.lo - K.xi.lo) / K.xi.step;
    if (std::abs(d0 - std::nearbyint(d0)) > 1e-9)
        throw Error(Status::grid_mismatch, "eta - xi does not fall on a common lattice of the kernel grid");
    const long nxi = static_cast<long>(K.xi.count), neta = static_cast<long>(K.eta.count);
    const long longest = std::min(nxi, neta);
    const long need = (longest + N - 1) / N;
    const long nx = x_per_unit > 0 ? x_per_unit : std::max(1L, need);
    if (nx < need)
        throw Error(Status::invalid_argument, "x grid too coarse for exact inversion: need at least " +
                                                  std::to_string(need) + " samples per unit");
    const std::size_t Q = static_cast<std::size_t>(nx * N);
    FunctionPlane g;
    g.x.step = 1.0 / static_cast<double>(nx);
    g.x.lo = -static_cast<double>(N / 2);
    g.x.count = Q;
    g.y.step = K.xi.step;
    g.y.lo = (K.eta.lo - K.xi.lo) - static_cast<double>(nxi - 1) * K.xi.step;
    g.y.count = static_cast<std::size_t>(nxi + neta - 1);
    g.values.assign(g.x.count * g.y.count, cplx{});
    const detail::Dft dft(Q, -1);
    const double delta = K.xi.step;
    parallel_for(g.y.count, [&](std::size_t t) {
        const long d = static_cast<long>(t) - (nxi - 1);
        const long i0 = std::max(0L, -d);
        const long i1 = std::min(nxi, neta - d);
        if (i1 <= i0) return;
        std::vector<cplx> b(Q, cplx{}), B(Q);
        bool any = false;
        for (long i = i0; i < i1; ++i) {
            const cplx a = K.at(static_cast<std::size_t>(i), static_cast<std::size_t>(i + d));
            if (a == cplx{}) continue;
            any = true;
            const double r = static_cast<double>(i - i0);
            b[static_cast<std::size_t>(i - i0)] = a * std::polar(1.0, -2.0 * pi * g.x.lo * r * delta);
        }
        if (!any) return;
        dft.run(b.data(), B.data());
        const double v = g.y.node(t);
        const double base = K.xi.node(static_cast<std::size_t>(i0)) + 0.5 * v;
        for (std::size_t n = 0; n < Q; ++n) g.at(n, t) = B[n] * std::polar(delta, -2.0 * pi * g.x.node(n) * base);
    });
    return g;
}

double x_edge_mass(const FunctionPlane& g) {
    const auto band = std::min<std::size_t>(g.x.count, static_cast<std::size_t>(1.0 / g.x.step));
    double total = 0.0, edge = 0.0;
    for (std::size_t i = 0; i < g.x.count; ++i)
        for (std::size_t j = 0; j < g.y.count; ++j) {
            const double m = std::norm(g.at(i, j));
            total += m;
            if (i < band || i + band >= g.x.count) edge += m;
        }
    return total > 0.0 ? edge / total : 0.0;
}

}  // namespace

Grid2n kernel_to_function(const SampledKernel& K, const InversionOptions& options) {
    if (K.tail_mass > options.tail_tol)
        throw Error(Status::insufficient_decay, "kernel tail mass " + std::to_string(K.tail_mass) +
                                                    " exceeds inversion tolerance " + std::to_string(options.tail_tol));
    Grid2n g;
    g.periodic_x = true;
    g.provenance = "kernel_to_function(" + K.provenance + ")";
    for (const auto& f : K.factors) {
        g.factors.push_back(invert_plane(f, options.x_per_unit));
        g.edge_mass = std::max(g.edge_mass, x_edge_mass(g.factors.back()));
    }
    return g;
}

}  // namespace wz
