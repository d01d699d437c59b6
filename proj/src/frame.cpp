#include "weylzak/frame.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "weylzak/parallel.hpp"

namespace wz {

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::frame_sequence: return "FrameSequence";
        case Verdict::riesz_sequence: return "RieszSequence";
        case Verdict::orthonormal_system: return "OrthonormalSystem";
        case Verdict::not_frame: return "NotFrame";
        case Verdict::inconclusive: return "Inconclusive";
    }
    return "Inconclusive";
}

namespace {

double max_of(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, x);
    return m;
}

ThresholdProbe probe(const std::vector<double>& v, double tau_rel, bool global, double ortho_tol) {
    ThresholdProbe p;
    const double mx = max_of(v);
    if (!(mx > 0.0)) throw Error(Status::zero_generator, "bracket table is identically zero");
    p.tau_rel = tau_rel;
    p.tau_abs = tau_rel * mx;
    std::size_t support = 0;
    double A = std::numeric_limits<double>::infinity(), B = 0.0;
    for (double x : v) {
        const bool in = x > p.tau_abs;
        if (in) ++support;
        if (in || global) {
            A = std::min(A, x);
            B = std::max(B, x);
        }
    }
    p.A = A;
    p.B = B;
    p.support_fraction = static_cast<double>(support) / static_cast<double>(v.size());
    const bool full = support == v.size();
    if (full) {
        p.verdict = (std::abs(A - 1.0) <= ortho_tol && std::abs(B - 1.0) <= ortho_tol) ? Verdict::orthonormal_system
                                                                                         : Verdict::riesz_sequence;
    } else {
        p.verdict = global ? Verdict::not_frame : Verdict::frame_sequence;
    }
    return p;
}

BracketTable coarse(const BracketTable& B) {
    BracketTable C = B;
    for (auto& f : C.factors) {
        const std::size_t sx = f.xi.count >= 4 && f.xi.count % 2 == 0 ? 2 : 1;
        const std::size_t sq = f.xi_prime.count >= 4 && f.xi_prime.count % 2 == 0 ? 2 : 1;
        BracketPlane P;
        P.variant = f.variant;
        P.xi = f.xi;
        P.xi.count = f.xi.count / sx;
        P.xi.step = f.xi.step * static_cast<double>(sx);
        P.xi_prime = f.xi_prime;
        P.xi_prime.count = f.xi_prime.count / sq;
        P.xi_prime.step = f.xi_prime.step * static_cast<double>(sq);
        P.values.resize(P.xi.count * P.xi_prime.count);
        for (std::size_t i = 0; i < P.xi.count; ++i)
            for (std::size_t q = 0; q < P.xi_prime.count; ++q) P.at(i, q) = f.at(i * sx, q * sq);
        f = std::move(P);
    }
    return C;
}

FrameReport bounds(const BracketTable& B, const FrameOptions& o, bool global) {
    const std::vector<double> v = real_values(B);
    if (v.empty()) throw Error(Status::zero_generator, "empty bracket table");
    FrameReport r;
    r.global = global;
    const ThresholdProbe base = probe(v, o.tau_rel, global, o.ortho_tol);
    const ThresholdProbe lo = probe(v, o.tau_rel / 10.0, global, o.ortho_tol);
    const ThresholdProbe hi = probe(v, o.tau_rel * 10.0, global, o.ortho_tol);
    r.A = base.A;
    r.B = base.B;
    r.support_fraction = base.support_fraction;
    r.tau_rel = base.tau_rel;
    r.tau_abs = base.tau_abs;
    r.sensitivity = {lo, hi};
    r.stable = lo.verdict == base.verdict && hi.verdict == base.verdict &&
               lo.support_fraction == base.support_fraction && hi.support_fraction == base.support_fraction;

    const ThresholdProbe c = probe(real_values(coarse(B)), o.tau_rel, global, o.ortho_tol);
    r.refinement_A = r.A > 0.0 ? std::abs(c.A - r.A) / r.A : std::abs(c.A);
    r.refinement_B = r.B > 0.0 ? std::abs(c.B - r.B) / r.B : std::abs(c.B);
    r.refinement_ok = r.refinement_A <= o.refinement_tol;
    r.verdict = (r.stable && r.refinement_ok) ? base.verdict : Verdict::inconclusive;
    return r;
}

}  // namespace

FrameReport frame_bounds(const BracketTable& B, const FrameOptions& options) { return bounds(B, options, false); }
FrameReport riesz_bounds(const BracketTable& B, const FrameOptions& options) { return bounds(B, options, true); }

bool orthonormality_check(const BracketTable& B, double tol) {
    const std::vector<double> v = real_values(B);
    for (double x : v)
        if (std::abs(x - 1.0) > tol) return false;
    return !v.empty();
}

DualReport dual_existence(const BracketTable& B, double tau_rel) {
    const std::vector<double> v = real_values(B);
    const double mx = max_of(v);
    if (!(mx > 0.0)) throw Error(Status::zero_generator, "bracket table is identically zero");
    DualReport r;
    for (double f : {1.0, 0.25, 0.0625}) {
        const double t = tau_rel * mx * f;
        double s = 0.0;
        for (double x : v) s += 1.0 / std::max(x, t);
        r.thresholds.push_back(t);
        r.integrals.push_back(s / static_cast<double>(v.size()));
    }
    r.growth = r.integrals.back() / r.integrals.front();
    r.exists = r.growth < 2.0;
    return r;
}

namespace {

ZakField divide(const ZakField& Z, const BracketTable& B, double power) {
    if (Z.dim() != B.dim()) throw Error(Status::dimension_mismatch, "Zak field and bracket of different dimension");
    ZakField out = Z;
    for (std::size_t f = 0; f < Z.dim(); ++f) {
        ZakPlane& P = out.factors[f];
        const BracketPlane& Bf = B.factors[f];
        if (!P.xi.same_as(Bf.xi) || !P.xi_prime.same_as(Bf.xi_prime))
            throw Error(Status::grid_mismatch, "Zak field and bracket table on different torus grids");
        const std::vector<double> w = real_values(Bf);
        for (std::size_t i = 0; i < P.xi.count; ++i)
            for (std::size_t q = 0; q < P.xi_prime.count; ++q) {
                const double b = w[i * P.xi_prime.count + q];
                const double s = b > 0.0 ? 1.0 / std::pow(b, power) : 0.0;
                for (std::size_t e = 0; e < P.eta.count; ++e) P.at(i, q, e) *= s;
            }
    }
    return out;
}

}  // namespace

ZakField dualize(const ZakField& Z, const BracketTable& B, double tau_rel) {
    const DualReport r = dual_existence(B, tau_rel);
    if (!r.exists) {
        std::ostringstream os;
        os << "NoDualExists: mean of 1/max(B,t) grows by " << r.growth << " over t = ";
        for (std::size_t i = 0; i < r.thresholds.size(); ++i)
            os << (i ? ", " : "") << r.thresholds[i] << " -> " << r.integrals[i];
        throw Error(Status::no_dual, os.str());
    }
    ZakField out = divide(Z, B, 1.0);
    out.provenance = "dual(" + Z.provenance + ")";
    return out;
}

ZakField orthonormalize(const ZakField& Z, const BracketTable& B, double tau_rel) {
    FrameOptions o;
    o.tau_rel = tau_rel;
    const std::vector<double> v = real_values(B);
    const double mx = max_of(v);
    if (!(mx > 0.0)) throw Error(Status::zero_generator, "bracket table is identically zero");
    const double mn = *std::min_element(v.begin(), v.end());
    if (!(mn > tau_rel * mx))
        throw Error(Status::not_riesz, "orthonormalize needs a Riesz generator; bracket minimum " + std::to_string(mn));
    ZakField out = divide(Z, B, 0.5);
    out.provenance = "orthonormalize(" + Z.provenance + ")";
    return out;
}

Membership membership_multiplier(const ZakField& Zf, const ZakField& Zphi, const BracketTable& Bphi, double tol,
                                 double tau_rel) {
    if (zak_norm(Zphi) == 0.0) throw Error(Status::zero_generator, "membership test against a zero generator");
    const BracketTable cross = bracket(Zf, Zphi);
    Membership m;
    m.r = cross;
    m.r.self = false;
    for (std::size_t f = 0; f < Bphi.dim(); ++f) {
        const std::vector<double> w = real_values(Bphi.factors[f]);
        const double mx = max_of(w);
        BracketPlane& R = m.r.factors[f];
        for (std::size_t i = 0; i < R.values.size(); ++i)
            R.values[i] = w[i] > tau_rel * mx ? R.values[i] / w[i] : cplx{};
    }
    const double nf = zak_norm(Zf);
    if (Zf.dim() == 1) {
        const ZakPlane &F = Zf.factors[0], &P = Zphi.factors[0];
        const BracketPlane& R = m.r.factors[0];
        const std::vector<double> w = real_values(Bphi.factors[0]);
        double res = 0.0, wn = 0.0;
        for (std::size_t i = 0; i < F.xi.count; ++i)
            for (std::size_t q = 0; q < F.xi_prime.count; ++q) {
                const cplx r = R.at(i, q);
                wn += std::norm(r) * w[i * F.xi_prime.count + q];
                for (std::size_t e = 0; e < F.eta.count; ++e) res += std::norm(F.at(i, q, e) - r * P.at(i, q, e));
            }
        const double cell = F.xi.step * F.xi_prime.step;
        m.residual = nf > 0.0 ? std::sqrt(res * cell * F.eta.step) / nf : 0.0;
        m.weighted_norm = std::sqrt(wn * cell);
    } else {
        // ||f - r phi||^2 = ||f||^2 - 2 Re <f, r phi> + ||r phi||^2, each a product over factors.
        double ff = 1.0, rr = 1.0, wn = 1.0;
        cplx fr(1.0, 0.0);
        for (std::size_t f = 0; f < Zf.dim(); ++f) {
            const ZakPlane &F = Zf.factors[f], &P = Zphi.factors[f];
            const BracketPlane& R = m.r.factors[f];
            const std::vector<double> w = real_values(Bphi.factors[f]);
            double a = 0.0, c = 0.0, d = 0.0;
            cplx b{};
            for (std::size_t i = 0; i < F.xi.count; ++i)
                for (std::size_t q = 0; q < F.xi_prime.count; ++q) {
                    const cplx r = R.at(i, q);
                    d += std::norm(r) * w[i * F.xi_prime.count + q];
                    for (std::size_t e = 0; e < F.eta.count; ++e) {
                        a += std::norm(F.at(i, q, e));
                        b += F.at(i, q, e) * std::conj(r * P.at(i, q, e));
                        c += std::norm(r * P.at(i, q, e));
                    }
                }
            const double cell = F.xi.step * F.xi_prime.step;
            ff *= a * cell * F.eta.step;
            fr *= b * (cell * F.eta.step);
            rr *= c * cell * F.eta.step;
            wn *= d * cell;
        }
        const double res = std::max(0.0, ff - 2.0 * fr.real() + rr);
        m.residual = nf > 0.0 ? std::sqrt(res) / nf : 0.0;
        m.weighted_norm = std::sqrt(wn);
    }
    m.member = m.residual <= tol && std::isfinite(m.weighted_norm);
    return m;
}

namespace {

// Max over dyadic rectangles of avg(w) avg(1/w), per level max(a,b).
std::vector<double> scan(const std::vector<double>& w, std::size_t nx, std::size_t ny, int depth, double floor) {
    std::vector<double> inv(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) inv[i] = 1.0 / std::max(w[i], floor);
    std::vector<double> per_level(static_cast<std::size_t>(depth) + 1, 0.0);
    std::vector<std::pair<int, int>> pairs;
    for (int a = 0; a <= depth; ++a)
        for (int b = 0; b <= depth; ++b)
            if ((nx >> a) >= 1 && (ny >> b) >= 1) pairs.emplace_back(a, b);
    std::vector<double> best(pairs.size(), 0.0);
    parallel_for(pairs.size(), [&](std::size_t p) {
        const auto [a, b] = pairs[p];
        const std::size_t sx = nx >> a, sy = ny >> b;
        const std::size_t hx = std::max<std::size_t>(1, sx / 2), hy = std::max<std::size_t>(1, sy / 2);
        const double area = static_cast<double>(sx * sy);
        double m = 0.0;
        for (std::size_t ox = 0; ox < nx; ox += hx)
            for (std::size_t oy = 0; oy < ny; oy += hy) {
                double sw = 0.0, si = 0.0;
                for (std::size_t u = 0; u < sx; ++u) {
                    const std::size_t row = ((ox + u) % nx) * ny;
                    for (std::size_t v = 0; v < sy; ++v) {
                        const std::size_t idx = row + (oy + v) % ny;
                        sw += w[idx];
                        si += inv[idx];
                    }
                }
                m = std::max(m, (sw / area) * (si / area));
            }
        best[p] = m;
    });
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        const int L = std::max(pairs[p].first, pairs[p].second);
        per_level[static_cast<std::size_t>(L)] = std::max(per_level[static_cast<std::size_t>(L)], best[p]);
    }
    return per_level;
}

}  // namespace

A2Report a2_constant(const BracketTable& B, const A2Options& o) {
    if (B.dim() != 1) throw Error(Status::dimension_mismatch, "the A2 estimator is implemented for n = 1 only");
    const BracketPlane& P = B.plane();
    const std::vector<double> w = real_values(P);
    const double mx = max_of(w);
    if (!(mx > 0.0)) throw Error(Status::zero_generator, "bracket table is identically zero");
    const std::size_t nx = P.xi.count, ny = P.xi_prime.count;
    int depth = 0;
    while (depth < o.depth && ((nx >> (depth + 1)) >= 1 || (ny >> (depth + 1)) >= 1)) ++depth;
    A2Report r;
    r.depth = depth;
    const double floor = o.floor_rel * mx;
    for (double x : w)
        if (x <= floor) ++r.nonpositive_nodes;
    const std::vector<double> levels = scan(w, nx, ny, depth, floor);
    double run = 0.0;
    for (double c : levels) {
        run = std::max(run, c);
        r.level_trace.push_back(run);
    }
    r.C = r.level_trace.back();
    for (double f : {1.0, 0.25, 0.0625}) {
        r.floors.push_back(floor * f);
        const std::vector<double> lv = scan(w, nx, ny, depth, floor * f);
        r.floor_trace.push_back(*std::max_element(lv.begin(), lv.end()));
    }
    const std::size_t n = r.level_trace.size();
    r.flat = n < 2 || r.level_trace[n - 1] <= r.level_trace[n - 2] * (1.0 + o.flat_tol);
    r.diverging = r.nonpositive_nodes > 0 || r.floor_trace.back() > 2.0 * r.floor_trace.front();
    r.schauder = !r.diverging && r.flat && std::isfinite(r.C);
    return r;
}

}  // namespace wz
