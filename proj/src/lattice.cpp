#include "weylzak/lattice.hpp"

#include <cmath>
#include <numbers>

#include <json.hpp>

#include "weylzak/io.hpp"

namespace wz {

using json = nlohmann::json;
constexpr double pi = std::numbers::pi;

LatticePoint::LatticePoint(std::vector<long> k_, std::vector<long> l_) : k(std::move(k_)), l(std::move(l_)) {
    if (k.size() != l.size() || k.empty())
        throw Error(Status::dimension_mismatch, "lattice point needs k and l of equal length n >= 1");
}

bool LatticePoint::is_zero() const {
    for (std::size_t i = 0; i < k.size(); ++i)
        if (k[i] != 0 || l[i] != 0) return false;
    return true;
}

static void same_dim(const LatticePoint& p, const LatticePoint& q) {
    if (p.dim() != q.dim())
        throw Error(Status::dimension_mismatch, "lattice points of dimension " + std::to_string(p.dim()) + " and " +
                                                    std::to_string(q.dim()));
}

LatticePoint LatticePoint::operator+(const LatticePoint& o) const {
    same_dim(*this, o);
    LatticePoint r = *this;
    for (std::size_t i = 0; i < k.size(); ++i) {
        r.k[i] += o.k[i];
        r.l[i] += o.l[i];
    }
    return r;
}

LatticePoint LatticePoint::operator-() const {
    LatticePoint r = *this;
    for (std::size_t i = 0; i < k.size(); ++i) {
        r.k[i] = -k[i];
        r.l[i] = -l[i];
    }
    return r;
}

LatticePoint LatticePoint::operator-(const LatticePoint& o) const { return *this + (-o); }

long long symplectic(const LatticePoint& p, const LatticePoint& q) {
    same_dim(p, q);
    long long e = 0;
    for (std::size_t i = 0; i < p.dim(); ++i)
        e += static_cast<long long>(p.k[i]) * q.l[i] - static_cast<long long>(p.l[i]) * q.k[i];
    return e;
}

long long dot_kl(const LatticePoint& p) {
    long long e = 0;
    for (std::size_t i = 0; i < p.dim(); ++i) e += static_cast<long long>(p.k[i]) * p.l[i];
    return e;
}

cplx cocycle(const LatticePoint& p, const LatticePoint& q) {
    const long long e = symplectic(p, q);
    return cplx((e % 2 == 0) ? 1.0 : -1.0, 0.0);
}

const FunctionPlane& Grid2n::plane() const {
    if (factors.size() != 1) throw Error(Status::dimension_mismatch, "expected a 1-d grid");
    return factors.front();
}

double l2_norm(const FunctionPlane& g) {
    double s = 0.0;
    for (const cplx& v : g.values) s += std::norm(v);
    return std::sqrt(s * g.x.step * g.y.step);
}

double l2_norm(const Grid2n& g) {
    double r = 1.0;
    for (const auto& f : g.factors) r *= l2_norm(f);
    return g.factors.empty() ? 0.0 : r;
}

FunctionPlane twisted_translate(const FunctionPlane& g, long k, long l) {
    const long nx = g.x.per_unit();
    const long ny = g.y.per_unit();
    FunctionPlane out{g.x, g.y, std::vector<cplx>(g.values.size())};
    const long sx = k * nx;
    const long sy = l * ny;
    std::vector<cplx> phase_x(g.x.count), phase_y(g.y.count);
    for (std::size_t i = 0; i < g.x.count; ++i) phase_x[i] = std::polar(1.0, pi * g.x.node(i) * static_cast<double>(l));
    for (std::size_t j = 0; j < g.y.count; ++j) phase_y[j] = std::polar(1.0, -pi * g.y.node(j) * static_cast<double>(k));
    const long cx = static_cast<long>(g.x.count), cy = static_cast<long>(g.y.count);
    for (long i = 0; i < cx; ++i) {
        const long si = i - sx;
        if (si < 0 || si >= cx) continue;
        for (long j = 0; j < cy; ++j) {
            const long sj = j - sy;
            if (sj < 0 || sj >= cy) continue;
            out.at(i, j) = phase_x[i] * phase_y[j] * g.at(si, sj);
        }
    }
    return out;
}

Grid2n twisted_translate(const Grid2n& g, const LatticePoint& p) {
    if (p.dim() != g.dim())
        throw Error(Status::dimension_mismatch, "lattice point dimension does not match the grid");
    Grid2n out = g;
    for (std::size_t f = 0; f < g.dim(); ++f) out.factors[f] = twisted_translate(g.factors[f], p.k[f], p.l[f]);
    out.provenance = g.provenance + "|twisted_translate";
    return out;
}

Grid2n pad(const Grid2n& g, long units) {
    Grid2n out = g;
    for (std::size_t f = 0; f < g.dim(); ++f) {
        const FunctionPlane& s = g.factors[f];
        const long px = units * s.x.per_unit();
        const long py = units * s.y.per_unit();
        FunctionPlane& d = out.factors[f];
        d.x.lo = s.x.lo - static_cast<double>(units);
        d.y.lo = s.y.lo - static_cast<double>(units);
        d.x.count = s.x.count + 2 * px;
        d.y.count = s.y.count + 2 * py;
        d.values.assign(d.x.count * d.y.count, cplx{});
        for (std::size_t i = 0; i < s.x.count; ++i)
            for (std::size_t j = 0; j < s.y.count; ++j) d.at(i + px, j + py) = s.at(i, j);
    }
    return out;
}

double sinc(double t) {
    const double a = pi * t;
    if (std::abs(a) < 1e-4) return 1.0 - a * a / 6.0 + a * a * a * a / 120.0;
    return std::sin(a) / a;
}

static bool unit_cell(double v) { return v >= 0.0 && v < 1.0; }

cplx indicator_kernel(double xi, double eta) {
    if (!unit_cell(eta - xi)) return {};
    const double s = 0.5 * (xi + eta);
    return std::polar(sinc(s), pi * s);
}

cplx exp_kernel(double xi, double eta) {
    if (!unit_cell(xi) || !unit_cell(eta)) return {};
    return {std::exp(xi * eta), 0.0};
}

GeneratorSpec GeneratorSpec::exp_kernel() {
    GeneratorSpec s;
    s.kind = Kind::exp_kernel;
    return s;
}

GeneratorSpec GeneratorSpec::separable(std::vector<GeneratorSpec> factors) {
    if (factors.empty()) throw Error(Status::invalid_argument, "separable product needs factors");
    for (const auto& f : factors)
        if (f.n != 1 || f.kind == Kind::separable)
            throw Error(Status::dimension_mismatch, "separable factors must be 1-dimensional");
    GeneratorSpec s;
    s.kind = Kind::separable;
    s.n = static_cast<int>(factors.size());
    s.factors = std::move(factors);
    return s;
}

GeneratorSpec GeneratorSpec::twisted_convolution(GeneratorSpec a, GeneratorSpec b) {
    if (a.n != 1 || b.n != 1 || a.kind == Kind::separable || b.kind == Kind::separable)
        throw Error(Status::dimension_mismatch, "twisted convolution operands must be 1-dimensional");
    GeneratorSpec s;
    s.kind = Kind::twisted_convolution;
    s.factors = {std::move(a), std::move(b)};
    return s;
}

GeneratorSpec GeneratorSpec::sampled_function(FunctionPlane g) {
    if (g.values.size() != g.x.count * g.y.count)
        throw Error(Status::invalid_argument, "sampled function value count does not match its axes");
    g.x.per_unit();
    g.y.per_unit();
    GeneratorSpec s;
    s.kind = Kind::sampled_function;
    s.function = std::make_shared<const FunctionPlane>(std::move(g));
    return s;
}

GeneratorSpec GeneratorSpec::sampled_kernel(KernelPlane k) {
    if (k.values.size() != k.xi.count * k.eta.count)
        throw Error(Status::invalid_argument, "sampled kernel value count does not match its axes");
    k.xi.per_unit();
    k.eta.per_unit();
    for (const cplx& v : k.values)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw Error(Status::invalid_argument, "sampled kernel contains non-finite values");
    GeneratorSpec s;
    s.kind = Kind::sampled_kernel;
    s.kernel = std::make_shared<const KernelPlane>(std::move(k));
    return s;
}

std::string kind_name(GeneratorSpec::Kind kind) {
    switch (kind) {
        case GeneratorSpec::Kind::indicator_box: return "indicator_box";
        case GeneratorSpec::Kind::exp_kernel: return "exp_kernel";
        case GeneratorSpec::Kind::separable: return "separable";
        case GeneratorSpec::Kind::sampled_function: return "sampled_function";
        case GeneratorSpec::Kind::sampled_kernel: return "sampled_kernel";
        case GeneratorSpec::Kind::twisted_convolution: return "twisted_convolution";
    }
    return "unknown";
}

namespace {

Axis axis_from(const json& j, const char* name) {
    if (!j.contains(name)) throw Error(Status::parse, std::string("grid is missing axis '") + name + "'");
    const json& a = j.at(name);
    Axis ax;
    ax.lo = a.at("lo").get<double>();
    ax.step = a.at("step").get<double>();
    ax.count = a.at("count").get<std::size_t>();
    ax.per_unit();
    return ax;
}

json axis_to(const Axis& a) { return {{"lo", a.lo}, {"step", a.step}, {"count", a.count}}; }

std::vector<cplx> values_from(const json& g, std::size_t expected) {
    const auto re = g.at("re").get<std::vector<double>>();
    std::vector<double> im(re.size(), 0.0);
    if (g.contains("im")) im = g.at("im").get<std::vector<double>>();
    if (re.size() != expected || im.size() != expected)
        throw Error(Status::parse, "grid value arrays have " + std::to_string(re.size()) + " entries, expected " +
                                       std::to_string(expected));
    std::vector<cplx> v(expected);
    for (std::size_t i = 0; i < expected; ++i) v[i] = {re[i], im[i]};
    return v;
}

void values_to(json& g, const std::vector<cplx>& v) {
    std::vector<double> re(v.size()), im(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        re[i] = v[i].real();
        im[i] = v[i].imag();
    }
    g["re"] = re;
    g["im"] = im;
}

GeneratorSpec parse(const json& j) {
    if (!j.is_object() || !j.contains("kind")) throw Error(Status::parse, "generator spec needs a 'kind'");
    const std::string kind = j.at("kind").get<std::string>();
    const int n = j.value("n", kind == "separable" && j.contains("factors") ? static_cast<int>(j["factors"].size()) : 1);
    if (n < 1) throw Error(Status::parse, "generator dimension n must be >= 1");
    if (kind != "separable" && n != 1)
        throw Error(Status::dimension_mismatch,
                    "dense generators with n > 1 are not supported; use a separable product of 1-d factors");
    if (kind == "indicator_box") return GeneratorSpec::indicator_box();
    if (kind == "exp_kernel") return GeneratorSpec::exp_kernel();
    if (kind == "separable" || kind == "twisted_convolution") {
        if (!j.contains("factors") || !j["factors"].is_array())
            throw Error(Status::parse, kind + " needs a 'factors' array");
        std::vector<GeneratorSpec> fs;
        for (const auto& f : j["factors"]) fs.push_back(parse(f));
        if (kind == "separable") {
            if (static_cast<int>(fs.size()) != n)
                throw Error(Status::dimension_mismatch, "separable n does not match the number of factors");
            return GeneratorSpec::separable(std::move(fs));
        }
        if (fs.size() != 2) throw Error(Status::parse, "twisted_convolution takes exactly two factors");
        return GeneratorSpec::twisted_convolution(std::move(fs[0]), std::move(fs[1]));
    }
    if (kind == "sampled_function") {
        if (j.contains("file")) {
            Grid2n g = io::read_grid_bin(j["file"].get<std::string>());
            if (g.dim() != 1) throw Error(Status::dimension_mismatch, "sampled function file must be 1-d");
            return GeneratorSpec::sampled_function(g.factors.front());
        }
        const json& g = j.at("grid");
        FunctionPlane p;
        p.x = axis_from(g, "x");
        p.y = axis_from(g, "y");
        p.values = values_from(g, p.x.count * p.y.count);
        return GeneratorSpec::sampled_function(std::move(p));
    }
    if (kind == "sampled_kernel") {
        if (j.contains("file")) {
            SampledKernel k = io::read_kernel_bin(j["file"].get<std::string>());
            if (k.dim() != 1) throw Error(Status::dimension_mismatch, "sampled kernel file must be 1-d");
            return GeneratorSpec::sampled_kernel(k.factors.front());
        }
        const json& g = j.at("grid");
        KernelPlane p;
        p.xi = axis_from(g, "xi");
        p.eta = axis_from(g, "eta");
        p.values = values_from(g, p.xi.count * p.eta.count);
        return GeneratorSpec::sampled_kernel(std::move(p));
    }
    throw Error(Status::parse, "unknown generator kind '" + kind + "'");
}

json dump(const GeneratorSpec& s) {
    json j;
    j["kind"] = kind_name(s.kind);
    j["n"] = s.n;
    if (!s.factors.empty()) {
        j["factors"] = json::array();
        for (const auto& f : s.factors) j["factors"].push_back(dump(f));
    }
    if (s.function) {
        json g;
        g["x"] = axis_to(s.function->x);
        g["y"] = axis_to(s.function->y);
        values_to(g, s.function->values);
        j["grid"] = g;
    }
    if (s.kernel) {
        json g;
        g["xi"] = axis_to(s.kernel->xi);
        g["eta"] = axis_to(s.kernel->eta);
        values_to(g, s.kernel->values);
        j["grid"] = g;
    }
    return j;
}

}  // namespace

GeneratorSpec GeneratorSpec::from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(Status::parse, std::string("generator spec is not valid JSON: ") + e.what());
    }
    try {
        return parse(j);
    } catch (const json::exception& e) {
        throw Error(Status::parse, std::string("malformed generator spec: ") + e.what());
    }
}

std::string GeneratorSpec::to_json() const { return dump(*this).dump(); }

static FactorModel model_of(const GeneratorSpec& s) {
    FactorModel m;
    m.kind = s.kind;
    switch (s.kind) {
        case GeneratorSpec::Kind::indicator_box:
            m.kernel = indicator_kernel;
            m.function = [](double x, double y) { return cplx(unit_cell(x) && unit_cell(y) ? 1.0 : 0.0, 0.0); };
            m.x_lo = 0;
            m.x_hi = 1;
            m.y_lo = 0;
            m.y_hi = 1;
            break;
        case GeneratorSpec::Kind::exp_kernel:
            m.kernel = exp_kernel;
            break;
        case GeneratorSpec::Kind::sampled_function:
            m.sampled_function = s.function;
            break;
        case GeneratorSpec::Kind::sampled_kernel:
            m.sampled_kernel = s.kernel;
            break;
        case GeneratorSpec::Kind::twisted_convolution:
            m.operands = s.factors;
            break;
        case GeneratorSpec::Kind::separable:
            throw Error(Status::dimension_mismatch, "nested separable products are not supported");
    }
    return m;
}

Materialized materialize(const GeneratorSpec& spec) {
    Materialized out;
    if (spec.kind == GeneratorSpec::Kind::separable) {
        if (static_cast<int>(spec.factors.size()) != spec.n)
            throw Error(Status::dimension_mismatch, "separable n does not match the number of factors");
        for (const auto& f : spec.factors) {
            if (f.n != 1) throw Error(Status::dimension_mismatch, "separable factors must be 1-dimensional");
            out.factors.push_back(model_of(f));
        }
    } else {
        if (spec.n != 1) throw Error(Status::dimension_mismatch, "dense generators with n > 1 are not supported");
        out.factors.push_back(model_of(spec));
    }
    return out;
}

cplx Materialized::kernel(const std::vector<double>& xi, const std::vector<double>& eta) const {
    if (xi.size() != factors.size() || eta.size() != factors.size())
        throw Error(Status::dimension_mismatch, "kernel evaluated with coordinates of the wrong dimension");
    cplx r(1.0, 0.0);
    for (std::size_t f = 0; f < factors.size(); ++f) {
        if (!factors[f].kernel) throw Error(Status::invalid_argument, "factor has no closed-form kernel");
        r *= factors[f].kernel(xi[f], eta[f]);
    }
    return r;
}

cplx Materialized::function(const std::vector<double>& x, const std::vector<double>& y) const {
    if (x.size() != factors.size() || y.size() != factors.size())
        throw Error(Status::dimension_mismatch, "function evaluated with coordinates of the wrong dimension");
    cplx r(1.0, 0.0);
    for (std::size_t f = 0; f < factors.size(); ++f) {
        if (!factors[f].function) throw Error(Status::invalid_argument, "factor has no closed-form function");
        r *= factors[f].function(x[f], y[f]);
    }
    return r;
}

Grid2n sample_function(const GeneratorSpec& spec, const Axis& x, const Axis& y) {
    x.per_unit();
    y.per_unit();
    const Materialized m = materialize(spec);
    Grid2n g;
    g.provenance = "sampled:" + kind_name(spec.kind);
    for (const auto& f : m.factors) {
        if (f.sampled_function) {
            g.factors.push_back(*f.sampled_function);
            continue;
        }
        if (!f.function)
            throw Error(Status::invalid_argument,
                        kind_name(f.kind) + " has no closed-form function; use kernel_to_function");
        FunctionPlane p{x, y, std::vector<cplx>(x.count * y.count)};
        for (std::size_t i = 0; i < x.count; ++i)
            for (std::size_t j = 0; j < y.count; ++j) p.at(i, j) = f.function(x.node(i), y.node(j));
        g.factors.push_back(std::move(p));
    }
    return g;
}

}  // namespace wz
