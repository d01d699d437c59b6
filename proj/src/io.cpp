#include "weylzak/io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <fstream>

#include <json.hpp>

namespace wz::io {

using json = nlohmann::json;

namespace {

constexpr char magic[8] = {'W', 'Z', 'K', 'B', 'I', 'N', '1', '\n'};

json axis_json(const Axis& a) { return {{"lo", a.lo}, {"step", a.step}, {"count", a.count}}; }

Axis axis_from(const json& j) {
    Axis a;
    a.lo = j.at("lo").get<double>();
    a.step = j.at("step").get<double>();
    a.count = j.at("count").get<std::size_t>();
    return a;
}

json provenance(const std::string& text) {
    try {
        return json::parse(text.empty() ? "{}" : text);
    } catch (const json::exception&) {
        return json(text);
    }
}

void put_u32(std::string& out, std::uint32_t v) {
    for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xffu));
}

class Writer {
public:
    explicit Writer(const std::string& path) : path_(path), out_(path, std::ios::binary) {
        if (!out_) throw Error(Status::io, "cannot open '" + path + "' for writing");
    }
    void header(const json& h) {
        const std::string text = h.dump();
        out_.write(magic, 8);
        std::string len;
        const std::uint64_t n = text.size();
        put_u32(len, static_cast<std::uint32_t>(n & 0xffffffffu));
        put_u32(len, static_cast<std::uint32_t>(n >> 32));
        out_.write(len.data(), 8);
        out_.write(text.data(), static_cast<std::streamsize>(text.size()));
    }
    void values(const std::vector<cplx>& v) {
        std::string buf;
        buf.reserve(v.size() * 8);
        for (const cplx& c : v) {
            put_u32(buf, std::bit_cast<std::uint32_t>(static_cast<float>(c.real())));
            put_u32(buf, std::bit_cast<std::uint32_t>(static_cast<float>(c.imag())));
        }
        out_.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    }
    void finish() {
        out_.flush();
        if (!out_) throw Error(Status::io, "write to '" + path_ + "' failed");
    }

private:
    std::string path_;
    std::ofstream out_;
};

class Reader {
public:
    explicit Reader(const std::string& path) : path_(path), in_(path, std::ios::binary) {
        if (!in_) throw Error(Status::io, "cannot open '" + path + "'");
    }
    json header() {
        char m[8];
        unsigned char len[8];
        in_.read(m, 8);
        in_.read(reinterpret_cast<char*>(len), 8);
        if (!in_ || std::string(m, 8) != std::string(magic, 8))
            throw Error(Status::parse, "'" + path_ + "' is not a weylzak binary container");
        std::uint64_t n = 0;
        for (int b = 7; b >= 0; --b) n = (n << 8) | len[b];
        std::string text(n, '\0');
        in_.read(text.data(), static_cast<std::streamsize>(n));
        if (!in_) throw Error(Status::parse, "truncated header in '" + path_ + "'");
        try {
            return json::parse(text);
        } catch (const json::exception& e) {
            throw Error(Status::parse, std::string("bad container header: ") + e.what());
        }
    }
    std::vector<cplx> values(std::size_t count) {
        std::vector<unsigned char> buf(count * 8);
        in_.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
        if (!in_) throw Error(Status::parse, "truncated payload in '" + path_ + "'");
        std::vector<cplx> v(count);
        auto word = [&](std::size_t off) {
            std::uint32_t w = 0;
            for (int b = 3; b >= 0; --b) w = (w << 8) | buf[off + static_cast<std::size_t>(b)];
            return static_cast<double>(std::bit_cast<float>(w));
        };
        for (std::size_t i = 0; i < count; ++i) v[i] = {word(8 * i), word(8 * i + 4)};
        return v;
    }

private:
    std::string path_;
    std::ifstream in_;
};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::ofstream open_csv(const std::string& path, const std::string& comment) {
    std::ofstream out(path);
    if (!out) throw Error(Status::io, "cannot open '" + path + "' for writing");
    if (!comment.empty()) out << "# " << comment << "\n";
    return out;
}

void need_1d(std::size_t n, const char* what) {
    if (n != 1) throw Error(Status::dimension_mismatch, std::string(what) + " CSV export is defined for n = 1");
}

}  // namespace

void write_kernel_bin(const SampledKernel& K, const std::string& path, const std::string& prov) {
    json h{{"type", "sampled_kernel"}, {"n", K.dim()}, {"tail_mass", K.tail_mass}, {"source", K.provenance},
           {"provenance", provenance(prov)}};
    h["factors"] = json::array();
    for (const auto& f : K.factors)
        h["factors"].push_back({{"xi", axis_json(f.xi)}, {"eta", axis_json(f.eta)}, {"dims", {f.xi.count, f.eta.count}}});
    Writer w(path);
    w.header(h);
    for (const auto& f : K.factors) w.values(f.values);
    w.finish();
}

void write_zak_bin(const ZakField& Z, const std::string& path, const std::string& prov) {
    json h{{"type", "zak_field"}, {"n", Z.dim()}, {"discarded_mass", Z.discarded_mass}, {"source", Z.provenance},
           {"provenance", provenance(prov)}};
    h["factors"] = json::array();
    for (const auto& f : Z.factors)
        h["factors"].push_back({{"xi", axis_json(f.xi)},
                                {"xi_prime", axis_json(f.xi_prime)},
                                {"eta", axis_json(f.eta)},
                                {"M", f.M},
                                {"variant", f.variant == ZakVariant::standard ? "standard" : "half_lattice"},
                                {"dims", {f.xi.count, f.xi_prime.count, f.eta.count}}});
    Writer w(path);
    w.header(h);
    for (const auto& f : Z.factors) w.values(f.values);
    w.finish();
}

void write_grid_bin(const Grid2n& g, const std::string& path, const std::string& prov) {
    json h{{"type", "function_grid"}, {"n", g.dim()}, {"periodic_x", g.periodic_x}, {"edge_mass", g.edge_mass},
           {"source", g.provenance}, {"provenance", provenance(prov)}};
    h["factors"] = json::array();
    for (const auto& f : g.factors)
        h["factors"].push_back({{"x", axis_json(f.x)}, {"y", axis_json(f.y)}, {"dims", {f.x.count, f.y.count}}});
    Writer w(path);
    w.header(h);
    for (const auto& f : g.factors) w.values(f.values);
    w.finish();
}

void write_gram_bin(const GramMatrix& G, const std::string& path, const std::string& prov) {
    json h{{"type", "gram_matrix"}, {"R", G.R}, {"n", G.dim()}, {"source", G.provenance},
           {"provenance", provenance(prov)}, {"dims", {G.G.rows(), G.G.cols()}}};
    json pts = json::array();
    for (const auto& p : G.points) pts.push_back({{"k", p.k}, {"l", p.l}});
    h["points"] = pts;
    std::vector<cplx> v;
    for (Eigen::Index i = 0; i < G.G.rows(); ++i)
        for (Eigen::Index j = 0; j < G.G.cols(); ++j) v.push_back(G.G(i, j));
    Writer w(path);
    w.header(h);
    w.values(v);
    w.finish();
}

std::string header_of(const std::string& path) { return Reader(path).header().dump(); }

SampledKernel read_kernel_bin(const std::string& path) {
    Reader r(path);
    const json h = r.header();
    if (h.value("type", "") != "sampled_kernel") throw Error(Status::parse, "'" + path + "' does not hold a kernel");
    SampledKernel K;
    K.tail_mass = h.value("tail_mass", 0.0);
    K.provenance = "file:" + path;
    for (const auto& f : h.at("factors")) {
        KernelPlane P{axis_from(f.at("xi")), axis_from(f.at("eta")), {}};
        P.values = r.values(P.xi.count * P.eta.count);
        K.factors.push_back(std::move(P));
    }
    return K;
}

ZakField read_zak_bin(const std::string& path) {
    Reader r(path);
    const json h = r.header();
    if (h.value("type", "") != "zak_field") throw Error(Status::parse, "'" + path + "' does not hold a Zak field");
    ZakField Z;
    Z.discarded_mass = h.value("discarded_mass", 0.0);
    Z.provenance = "file:" + path;
    for (const auto& f : h.at("factors")) {
        ZakPlane P;
        P.xi = axis_from(f.at("xi"));
        P.xi_prime = axis_from(f.at("xi_prime"));
        P.eta = axis_from(f.at("eta"));
        P.M = f.at("M").get<int>();
        P.variant = f.value("variant", "standard") == "standard" ? ZakVariant::standard : ZakVariant::half_lattice;
        P.values = r.values(P.xi.count * P.xi_prime.count * P.eta.count);
        Z.factors.push_back(std::move(P));
    }
    return Z;
}

Grid2n read_grid_bin(const std::string& path) {
    Reader r(path);
    const json h = r.header();
    if (h.value("type", "") != "function_grid") throw Error(Status::parse, "'" + path + "' does not hold a function grid");
    Grid2n g;
    g.periodic_x = h.value("periodic_x", false);
    g.edge_mass = h.value("edge_mass", 0.0);
    g.provenance = "file:" + path;
    for (const auto& f : h.at("factors")) {
        FunctionPlane P{axis_from(f.at("x")), axis_from(f.at("y")), {}};
        P.values = r.values(P.x.count * P.y.count);
        g.factors.push_back(std::move(P));
    }
    return g;
}

void write_kernel_csv(const SampledKernel& K, const std::string& path, const std::string& comment) {
    need_1d(K.dim(), "kernel");
    const KernelPlane& P = K.plane();
    auto out = open_csv(path, comment);
    out << "xi,eta,re,im\n";
    for (std::size_t i = 0; i < P.xi.count; ++i)
        for (std::size_t j = 0; j < P.eta.count; ++j) {
            const cplx v = P.at(i, j);
            out << num(P.xi.node(i)) << ',' << num(P.eta.node(j)) << ',' << num(v.real()) << ',' << num(v.imag()) << '\n';
        }
    if (!out) throw Error(Status::io, "write to '" + path + "' failed");
}

namespace {
std::size_t nearest(const Axis& a, double x) {
    const double t = std::nearbyint((x - a.lo) / a.step);
    if (t < 0) return 0;
    if (t >= static_cast<double>(a.count)) return a.count - 1;
    return static_cast<std::size_t>(t);
}
}  // namespace

void write_zak_csv_eta(const ZakField& Z, double eta_value, const std::string& path, const std::string& comment) {
    need_1d(Z.dim(), "Zak");
    const ZakPlane& P = Z.plane();
    const std::size_t e = nearest(P.eta, eta_value);
    auto out = open_csv(path, comment + (comment.empty() ? "" : " ") + "eta=" + num(P.eta.node(e)));
    out << "xi,xi_prime,re,im\n";
    for (std::size_t i = 0; i < P.xi.count; ++i)
        for (std::size_t q = 0; q < P.xi_prime.count; ++q) {
            const cplx v = P.at(i, q, e);
            out << num(P.xi.node(i)) << ',' << num(P.xi_prime.node(q)) << ',' << num(v.real()) << ',' << num(v.imag())
                << '\n';
        }
    if (!out) throw Error(Status::io, "write to '" + path + "' failed");
}

void write_zak_csv_xi_prime(const ZakField& Z, double xi_prime_value, const std::string& path,
                            const std::string& comment) {
    need_1d(Z.dim(), "Zak");
    const ZakPlane& P = Z.plane();
    const std::size_t q = nearest(P.xi_prime, xi_prime_value);
    auto out = open_csv(path, comment + (comment.empty() ? "" : " ") + "xi_prime=" + num(P.xi_prime.node(q)));
    out << "xi,eta,re,im\n";
    for (std::size_t i = 0; i < P.xi.count; ++i)
        for (std::size_t e = 0; e < P.eta.count; ++e) {
            const cplx v = P.at(i, q, e);
            out << num(P.xi.node(i)) << ',' << num(P.eta.node(e)) << ',' << num(v.real()) << ',' << num(v.imag()) << '\n';
        }
    if (!out) throw Error(Status::io, "write to '" + path + "' failed");
}

void write_bracket_csv(const BracketTable& B, const std::string& path, const std::string& comment) {
    need_1d(B.dim(), "bracket");
    const BracketPlane& P = B.plane();
    auto out = open_csv(path, comment);
    if (B.self) {
        const std::vector<double> v = real_values(P);
        out << "xi,xi_prime,value\n";
        for (std::size_t i = 0; i < P.xi.count; ++i)
            for (std::size_t q = 0; q < P.xi_prime.count; ++q)
                out << num(P.xi.node(i)) << ',' << num(P.xi_prime.node(q)) << ',' << num(v[i * P.xi_prime.count + q])
                    << '\n';
    } else {
        out << "xi,xi_prime,value_re,value_im\n";
        for (std::size_t i = 0; i < P.xi.count; ++i)
            for (std::size_t q = 0; q < P.xi_prime.count; ++q) {
                const cplx v = P.at(i, q);
                out << num(P.xi.node(i)) << ',' << num(P.xi_prime.node(q)) << ',' << num(v.real()) << ','
                    << num(v.imag()) << '\n';
            }
    }
    if (!out) throw Error(Status::io, "write to '" + path + "' failed");
}

std::string kernel_info_json(const SampledKernel& K) {
    json j{{"n", K.dim()}, {"hs_norm", hs_norm(K)}, {"tail_mass", K.tail_mass}, {"source", K.provenance}};
    j["factors"] = json::array();
    for (const auto& f : K.factors)
        j["factors"].push_back({{"xi", axis_json(f.xi)}, {"eta", axis_json(f.eta)}, {"edge_mass", edge_mass(f)}});
    return j.dump(2);
}

std::string zak_info_json(const ZakField& Z) {
    json j{{"n", Z.dim()}, {"norm", zak_norm(Z)}, {"discarded_mass", Z.discarded_mass}, {"source", Z.provenance}};
    j["factors"] = json::array();
    for (const auto& f : Z.factors)
        j["factors"].push_back({{"xi", axis_json(f.xi)},
                                {"xi_prime", axis_json(f.xi_prime)},
                                {"eta", axis_json(f.eta)},
                                {"M", f.M},
                                {"variant", f.variant == ZakVariant::standard ? "standard" : "half_lattice"}});
    return j.dump(2);
}

std::string bracket_summary_json(const BracketTable& B, double tau_rel) {
    const BracketSummary s = summarize(B, tau_rel);
    json j{{"min", s.min},
           {"max", s.max},
           {"argmin", s.argmin},
           {"argmax", s.argmax},
           {"l1", s.l1},
           {"support_threshold", s.threshold},
           {"below_threshold_fraction", s.below_threshold_fraction},
           {"self", B.self},
           {"eta_step", B.eta_step},
           {"eta_count", B.eta_count}};
    return j.dump(2);
}

namespace {
json probe_json(const ThresholdProbe& p) {
    return {{"tau_rel", p.tau_rel}, {"tau_abs", p.tau_abs}, {"A", p.A}, {"B", p.B},
            {"support_fraction", p.support_fraction}, {"verdict", verdict_name(p.verdict)}};
}
}  // namespace

std::string frame_report_json(const FrameReport& r) {
    json j{{"A", r.A},
           {"B", r.B},
           {"support_fraction", r.support_fraction},
           {"verdict", verdict_name(r.verdict)},
           {"tau_rel", r.tau_rel},
           {"tau_abs", r.tau_abs},
           {"stable", r.stable},
           {"scope", r.global ? "all nodes" : "support"},
           {"refinement", {{"relative_change_A", r.refinement_A}, {"relative_change_B", r.refinement_B}, {"ok", r.refinement_ok}}}};
    j["sensitivity"] = json::array();
    for (const auto& p : r.sensitivity) j["sensitivity"].push_back(probe_json(p));
    return j.dump(2);
}

std::string a2_report_json(const A2Report& r) {
    json j{{"C", r.C},
           {"depth", r.depth},
           {"level_trace", r.level_trace},
           {"floors", r.floors},
           {"floor_trace", r.floor_trace},
           {"nonpositive_nodes", r.nonpositive_nodes},
           {"flat", r.flat},
           {"diverging", r.diverging},
           {"schauder", r.schauder}};
    return j.dump(2);
}

std::string dual_report_json(const DualReport& r) {
    json j{{"exists", r.exists}, {"thresholds", r.thresholds}, {"integrals", r.integrals}, {"growth", r.growth}};
    return j.dump(2);
}

std::string membership_json(const Membership& m) {
    json j{{"residual", m.residual}, {"weighted_norm", m.weighted_norm}, {"member", m.member}};
    return j.dump(2);
}

std::string gram_json(const GramMatrix& G) {
    json j{{"R", G.R}, {"n", G.dim()}, {"source", G.provenance}};
    json idx = json::array(), re = json::array(), im = json::array();
    for (const auto& p : G.points) idx.push_back({{"k", p.k}, {"l", p.l}});
    for (Eigen::Index a = 0; a < G.G.rows(); ++a) {
        json r1 = json::array(), r2 = json::array();
        for (Eigen::Index b = 0; b < G.G.cols(); ++b) {
            r1.push_back(G.G(a, b).real());
            r2.push_back(G.G(a, b).imag());
        }
        re.push_back(r1);
        im.push_back(r2);
    }
    j["indices"] = idx;
    j["re"] = re;
    j["im"] = im;
    return j.dump(2);
}

std::string gram_bounds_json(const GramBounds& b) {
    json j{{"A_est", b.A}, {"B_est", b.B}, {"min_eigenvalue", b.min_eigenvalue}};
    return j.dump(2);
}

std::string cross_report_json(const CrossReport& r) {
    json j{{"max_deviation", r.max_deviation},
           {"worst", {{"k", r.worst.k}, {"l", r.worst.l}}},
           {"entries_pass", r.entries_pass},
           {"gram_bounds", {{"A_est", r.gram.A}, {"B_est", r.gram.B}}},
           {"bracket_bounds", {{"A", r.A_bracket}, {"B", r.B_bracket}}},
           {"bounds_pass", r.bounds_pass},
           {"pass", r.pass}};
    json e = json::array();
    for (const auto& c : r.entries)
        e.push_back({{"k", c.p.k}, {"l", c.p.l}, {"gram", {c.gram.real(), c.gram.imag()}},
                     {"bracket", {c.bracket.real(), c.bracket.imag()}}});
    j["entries"] = e;
    return j.dump(2);
}

}  // namespace wz::io
