#include <CLI11.hpp>
#include <json.hpp>
#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "weylzak/weylzak.h"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Failure {
    int exit_code;
    std::string message;
};

[[noreturn]] void input_error(const std::string& msg) { throw Failure{1, msg}; }

void check(wzk_status s, const std::string& what) {
    if (s == WZK_OK) return;
    int code = (s == WZK_ERR_NO_DUAL || s == WZK_ERR_NOT_RIESZ) ? 2 : 1;
    throw Failure{code, what + ": [" + wzk_status_name(s) + "] " + wzk_last_error()};
}

std::string take(char* s) {
    std::string out = s ? s : "";
    wzk_string_free(s);
    return out;
}

template <class T, void (*Free)(T*)>
struct Deleter {
    void operator()(T* p) const { Free(p); }
};
using Generator = std::unique_ptr<wzk_generator, Deleter<wzk_generator, wzk_generator_free>>;
using Kernel = std::unique_ptr<wzk_kernel, Deleter<wzk_kernel, wzk_kernel_free>>;
using Grid = std::unique_ptr<wzk_grid, Deleter<wzk_grid, wzk_grid_free>>;
using Zak = std::unique_ptr<wzk_zak, Deleter<wzk_zak, wzk_zak_free>>;
using Bracket = std::unique_ptr<wzk_bracket, Deleter<wzk_bracket, wzk_bracket_free>>;
using Gram = std::unique_ptr<wzk_gram, Deleter<wzk_gram, wzk_gram_free>>;

std::string sha256_hex(const std::string& data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw Failure{1, "sha256 failed"};
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

std::string utc_now() {
    auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void only_keys(const json& j, const std::string& section, std::initializer_list<const char*> keys) {
    if (!j.is_object()) input_error("config section '" + section + "' must be an object");
    std::set<std::string> allowed(keys.begin(), keys.end());
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key())) input_error("unknown key '" + it.key() + "' in config section '" + section + "'");
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        input_error(std::string("config key '") + key + "' has the wrong type");
    }
}

void resolve_files(json& g, const fs::path& base) {
    if (g.is_object()) {
        if (g.contains("file") && g["file"].is_string()) {
            fs::path p = g["file"].get<std::string>();
            if (p.is_relative()) g["file"] = (base / p).lexically_normal().string();
        }
        if (g.contains("factors"))
            for (auto& f : g["factors"]) resolve_files(f, base);
    }
}

struct Config {
    json raw;
    json generator;

    int M = 8;
    long xi_per_unit = 32, eta_per_unit = 32;
    double eta_half_width = 8.0;
    std::optional<std::pair<double, double>> xi_window, eta_window;
    long n_xi_prime = 0;
    std::size_t quad_nodes = 0;
    bool quadrature = false;
    bool fast = true;

    double tau_rel = 1e-8, ortho_tol = 1e-3, refinement_tol = 0.01;
    double member_tol = 1e-6, tail_tol = 1e-6, bridge_tol = 1e-4;
    int a2_depth = 6;
    double a2_floor_rel = 1e-8;

    bool oracle = true;
    int box_radius = 3;
    long x_per_unit = 0;

    std::string out_dir = "wzk_out";
    std::vector<std::string> formats{"json"};

    std::optional<std::pair<double, double>> zero_band;
    json member;
};

std::optional<std::pair<double, double>> window_of(const json& j, const char* key) {
    if (!j.contains(key)) return std::nullopt;
    const json& w = j.at(key);
    if (!w.is_array() || w.size() != 2 || !w[0].is_number() || !w[1].is_number())
        input_error(std::string("'") + key + "' must be [lo, hi]");
    double lo = w[0].get<double>(), hi = w[1].get<double>();
    if (!(hi > lo)) input_error(std::string("'") + key + "' must satisfy lo < hi");
    return std::make_pair(lo, hi);
}

Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) input_error("cannot read config '" + path + "'");
    Config c;
    try {
        c.raw = json::parse(in);
    } catch (const json::exception& e) {
        input_error("malformed config '" + path + "': " + e.what());
    }
    only_keys(c.raw, "root", {"generator", "grids", "thresholds", "oracle", "outputs", "fixture", "member"});
    if (!c.raw.contains("generator")) input_error("config needs a 'generator'");
    c.generator = c.raw["generator"];
    resolve_files(c.generator, fs::absolute(path).parent_path());

    json g = c.raw.value("grids", json::object());
    only_keys(g, "grids", {"truncation", "xi_per_unit", "eta_per_unit", "eta_half_width", "xi_window", "eta_window",
                           "n_xi_prime", "quad_nodes", "quadrature", "fast"});
    c.M = get_or(g, "truncation", c.M);
    c.xi_per_unit = get_or(g, "xi_per_unit", c.xi_per_unit);
    c.eta_per_unit = get_or(g, "eta_per_unit", c.eta_per_unit);
    c.eta_half_width = get_or(g, "eta_half_width", c.eta_half_width);
    c.xi_window = window_of(g, "xi_window");
    c.eta_window = window_of(g, "eta_window");
    c.n_xi_prime = get_or(g, "n_xi_prime", c.n_xi_prime);
    c.quad_nodes = get_or(g, "quad_nodes", c.quad_nodes);
    c.quadrature = get_or(g, "quadrature", c.quadrature);
    c.fast = get_or(g, "fast", c.fast);
    if (c.M < 0) input_error("grids.truncation must be >= 0");
    if (c.xi_per_unit <= 0 || c.eta_per_unit <= 0) input_error("grid resolutions must be positive");
    if (!(c.eta_half_width > 0)) input_error("grids.eta_half_width must be positive");
    if (c.n_xi_prime < 0) input_error("grids.n_xi_prime must be positive");
    if (c.n_xi_prime != 0 && c.n_xi_prime < 2L * c.M + 1)
        input_error("grids.n_xi_prime must be >= 2*truncation+1 = " + std::to_string(2 * c.M + 1));

    json t = c.raw.value("thresholds", json::object());
    only_keys(t, "thresholds", {"tau_rel", "ortho_tol", "refinement_tol", "member_tol", "tail_tol", "bridge_tol",
                                "a2_depth", "a2_floor_rel"});
    c.tau_rel = get_or(t, "tau_rel", c.tau_rel);
    c.ortho_tol = get_or(t, "ortho_tol", c.ortho_tol);
    c.refinement_tol = get_or(t, "refinement_tol", c.refinement_tol);
    c.member_tol = get_or(t, "member_tol", c.member_tol);
    c.tail_tol = get_or(t, "tail_tol", c.tail_tol);
    c.bridge_tol = get_or(t, "bridge_tol", c.bridge_tol);
    c.a2_depth = get_or(t, "a2_depth", c.a2_depth);
    c.a2_floor_rel = get_or(t, "a2_floor_rel", c.a2_floor_rel);
    if (!(c.tau_rel > 0) || !(c.ortho_tol > 0) || !(c.member_tol > 0) || !(c.bridge_tol > 0))
        input_error("thresholds must be positive");
    if (c.a2_depth < 1) input_error("thresholds.a2_depth must be >= 1");

    json o = c.raw.value("oracle", json::object());
    only_keys(o, "oracle", {"enabled", "box_radius", "x_per_unit"});
    c.oracle = get_or(o, "enabled", c.oracle);
    c.box_radius = get_or(o, "box_radius", c.box_radius);
    c.x_per_unit = get_or(o, "x_per_unit", c.x_per_unit);
    if (c.box_radius < 0) input_error("oracle.box_radius must be >= 0");

    json out = c.raw.value("outputs", json::object());
    only_keys(out, "outputs", {"directory", "formats"});
    c.out_dir = get_or(out, "directory", c.out_dir);
    if (out.contains("formats")) c.formats = get_or(out, "formats", c.formats);

    json fx = c.raw.value("fixture", json::object());
    only_keys(fx, "fixture", {"zero_xi_prime_band"});
    c.zero_band = window_of(fx, "zero_xi_prime_band");

    c.member = c.raw.value("member", json::object());
    only_keys(c.member, "member", {"translate", "function"});
    if (c.member.contains("function")) resolve_files(c.member["function"], fs::absolute(path).parent_path());
    return c;
}

void check_formats(const std::vector<std::string>& formats) {
    for (const auto& f : formats)
        if (f != "json" && f != "csv" && f != "bin") input_error("unknown output format '" + f + "'");
}

void prepare_out_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) input_error("cannot create output directory '" + dir + "': " + ec.message());
    fs::path probe = fs::path(dir) / ".wzk_write_probe";
    {
        std::ofstream f(probe);
        if (!f) input_error("output directory '" + dir + "' is not writable");
    }
    fs::remove(probe, ec);
}

class Run {
public:
    Run(Config cfg, std::string command, long seed, std::string hash)
        : c_(std::move(cfg)), command_(std::move(command)), seed_(seed), hash_(std::move(hash)) {
        report_["command"] = command_;
        report_["config_hash"] = hash_;
        report_["generated_at"] = utc_now();
        report_["seed"] = seed_;
        wzk_generator* g = nullptr;
        check(wzk_generator_from_json(c_.generator.dump().c_str(), &g), "generator");
        gen_.reset(g);
        check(wzk_generator_dim(gen_.get(), &n_), "generator");
        report_["generator"] = c_.generator;
        json d;
        d["tau_rel"] = c_.tau_rel;
        d["tail_tol"] = c_.tail_tol;
        d["truncation"] = c_.M;
        d["fixture_zero_band"] = c_.zero_band ? json::array({c_.zero_band->first, c_.zero_band->second}) : json();
        report_["diagnostics"] = d;
    }

    int execute() {
        int code = 0;
        if (command_ == "kernel") code = cmd_kernel();
        else if (command_ == "zak") code = cmd_zak();
        else if (command_ == "bracket") code = cmd_bracket();
        else if (command_ == "analyze") code = cmd_analyze();
        else if (command_ == "dualize") code = cmd_dualize();
        else if (command_ == "orthonormalize") code = cmd_orthonormalize();
        else if (command_ == "member") code = cmd_member();
        else if (command_ == "gram") code = cmd_gram();
        else if (command_ == "crosscheck") code = cmd_crosscheck();
        report_["exit_status"] = code;
        std::ofstream f(path("report.json"));
        f << report_.dump(2) << "\n";
        if (!f) throw Failure{1, "cannot write report.json"};
        return code;
    }

private:
    std::string path(const std::string& name) const { return (fs::path(c_.out_dir) / name).string(); }
    bool wants(const char* fmt) const {
        for (const auto& f : c_.formats)
            if (f == fmt) return true;
        return false;
    }
    std::string provenance(const std::string& what) const {
        json p;
        p["config_hash"] = hash_;
        p["command"] = command_;
        p["artifact"] = what;
        p["generator"] = c_.generator;
        p["diagnostics"] = report_["diagnostics"];
        return p.dump();
    }
    std::string comment() const {
        return "config_hash=" + hash_ + " tail_mass=" + fmt(report_["diagnostics"].value("kernel_tail_mass", 0.0)) +
               " tau_rel=" + fmt(c_.tau_rel);
    }
    static std::string fmt(double v) {
        char b[40];
        std::snprintf(b, sizeof b, "%.6g", v);
        return b;
    }

    wzk_kernel_options kernel_options() const {
        wzk_kernel_options o;
        wzk_kernel_options_default(&o);
        o.truncation = c_.M;
        o.eta_half_width = c_.eta_half_width;
        o.xi_per_unit = c_.xi_per_unit;
        o.eta_per_unit = c_.eta_per_unit;
        if (c_.xi_window) o.xi_lo = c_.xi_window->first, o.xi_hi = c_.xi_window->second;
        if (c_.eta_window) o.eta_lo = c_.eta_window->first, o.eta_hi = c_.eta_window->second;
        o.quad_nodes = c_.quad_nodes;
        o.force_quadrature = c_.quadrature ? 1 : 0;
        return o;
    }
    wzk_zak_options zak_options() const {
        wzk_zak_options o;
        wzk_zak_options_default(&o);
        o.truncation = c_.M;
        o.n_xi_prime = c_.n_xi_prime;
        o.fast = c_.fast ? 1 : 0;
        return o;
    }
    wzk_frame_options frame_options() const {
        wzk_frame_options o;
        wzk_frame_options_default(&o);
        o.tau_rel = c_.tau_rel;
        o.ortho_tol = c_.ortho_tol;
        o.refinement_tol = c_.refinement_tol;
        return o;
    }

    wzk_kernel* plain_kernel() {
        if (Kplain_) return Kplain_.get();
        wzk_kernel* k = nullptr;
        auto o = kernel_options();
        check(wzk_weyl_kernel(gen_.get(), &o, &k), "weyl_kernel");
        Kplain_.reset(k);
        double tail = 0;
        check(wzk_kernel_tail_mass(k, &tail), "kernel");
        report_["diagnostics"]["kernel_tail_mass"] = tail;
        return k;
    }

    // With the zeroed-band fixture the generator is mapped back from the masked Zak field.
    wzk_kernel* kernel() {
        if (!c_.zero_band) return plain_kernel();
        if (K_) return K_.get();
        wzk_kernel* kb = nullptr;
        check(wzk_zak_inverse(zak(), &kb), "zak_inverse");
        K_.reset(kb);
        double tail = 0;
        check(wzk_kernel_tail_mass(kb, &tail), "kernel");
        report_["diagnostics"]["fixture_kernel_tail_mass"] = tail;
        return kb;
    }

    wzk_zak* zak() {
        if (Z_) return Z_.get();
        wzk_zak* z = nullptr;
        auto o = zak_options();
        check(wzk_zak_forward(plain_kernel(), &o, &z), "zak_forward");
        Z_.reset(z);
        double d = 0;
        check(wzk_zak_discarded_mass(z, &d), "zak");
        report_["diagnostics"]["zak_discarded_mass"] = d;
        if (c_.zero_band) {
            wzk_zak* zb = nullptr;
            check(wzk_zak_zero_band(z, c_.zero_band->first, c_.zero_band->second, &zb), "zero_band");
            Z_.reset(zb);
        }
        return Z_.get();
    }

    wzk_bracket* bracket() {
        if (B_) return B_.get();
        wzk_zak* z = zak();
        wzk_bracket* b = nullptr;
        check(wzk_bracket_compute(z, z, &b), "bracket");
        B_.reset(b);
        return b;
    }

    // Function-domain generator padded so the oracle box fits.
    wzk_grid* function_grid() {
        if (G_) return G_.get();
        const int R = c_.box_radius;
        int has = 0;
        check(wzk_generator_has_function(gen_.get(), &has), "generator");
        wzk_grid* g = nullptr;
        if (has && !c_.zero_band) {
            long per = c_.x_per_unit > 0 ? c_.x_per_unit : 16;
            check(wzk_grid_sample(gen_.get(), -(R + 1.0), R + 2.0, per, &g), "sample_function");
            report_["diagnostics"]["oracle_function_path"] = "sampled";
        } else {
            wzk_grid* raw = nullptr;
            check(wzk_kernel_to_function(kernel(), c_.x_per_unit, c_.tail_tol, &raw), "kernel_to_function");
            Grid keep(raw);
            check(wzk_grid_pad(raw, R + 1, &g), "pad");
            report_["diagnostics"]["oracle_function_path"] = "kernel_to_function";
        }
        G_.reset(g);
        double edge = 0;
        check(wzk_grid_edge_mass(g, &edge), "grid");
        report_["diagnostics"]["oracle_grid_edge_mass"] = edge;
        return g;
    }

    json gram_section_trace(wzk_gram* G) {
        json trace = json::array();
        for (int r = 0; r <= c_.box_radius; ++r) {
            wzk_gram* s = nullptr;
            check(wzk_gram_section(G, r, &s), "gram_section");
            Gram keep(s);
            double a = 0, b = 0;
            check(wzk_gram_bounds(s, &a, &b), "gram_bounds");
            trace.push_back({{"R", r}, {"A_est", a}, {"B_est", b}});
        }
        return trace;
    }

    int cmd_kernel() {
        wzk_kernel* k = kernel();
        report_["kernel"] = json::parse(take_json(wzk_kernel_info_json, k, "kernel_info"));
        if (wants("bin")) check(wzk_kernel_write(k, path("kernel.bin").c_str(), "bin", provenance("kernel").c_str()), "write");
        if (wants("csv") && n_ == 1)
            check(wzk_kernel_write(k, path("kernel.csv").c_str(), "csv", comment().c_str()), "write");
        std::cout << "kernel: hs_norm=" << report_["kernel"].value("hs_norm", 0.0)
                  << " tail_mass=" << report_["diagnostics"].value("kernel_tail_mass", 0.0) << "\n";
        return 0;
    }

    template <class F, class H>
    std::string take_json(F f, H h, const char* what) {
        char* s = nullptr;
        check(f(h, &s), what);
        return take(s);
    }

    int cmd_zak() {
        wzk_zak* z = zak();
        report_["zak"] = json::parse(take_json(wzk_zak_info_json, z, "zak_info"));
        double kn = 0;
        check(wzk_kernel_hs_norm(kernel(), &kn), "hs_norm");
        report_["kernel_hs_norm"] = kn;
        if (wants("bin")) check(wzk_zak_write(z, path("zak.bin").c_str(), "bin", 0, provenance("zak").c_str()), "write");
        if (wants("csv") && n_ == 1)
            check(wzk_zak_write(z, path("zak").c_str(), "csv", 0.0, comment().c_str()), "write");
        std::cout << "zak: norm=" << report_["zak"].value("norm", 0.0) << " hs_norm=" << kn << "\n";
        return 0;
    }

    json bracket_summary(wzk_bracket* b) {
        char* s = nullptr;
        check(wzk_bracket_summary_json(b, c_.tau_rel, &s), "bracket_summary");
        return json::parse(take(s));
    }

    int cmd_bracket() {
        wzk_bracket* b = bracket();
        report_["bracket"] = bracket_summary(b);
        if (wants("csv") && n_ == 1) check(wzk_bracket_write_csv(b, path("bracket.csv").c_str(), comment().c_str()), "write");
        std::cout << "bracket: min=" << report_["bracket"].value("min", 0.0)
                  << " max=" << report_["bracket"].value("max", 0.0) << "\n";
        return 0;
    }

    void oracle_into(json& dst) {
        wzk_gram* G = gram();
        char* s = nullptr;
        int pass = 0;
        check(wzk_cross_validate(G, bracket(), c_.bridge_tol, &pass, &s), "cross_validate");
        dst["oracle"] = json::parse(take(s));
        dst["oracle"]["finite_sections"] = gram_section_trace(G);
        dst["oracle_agrees"] = pass != 0;
    }

    wzk_gram* gram() {
        if (Gm_) return Gm_.get();
        wzk_gram* G = nullptr;
        check(wzk_gram_matrix(function_grid(), c_.box_radius, &G), "gram_matrix");
        Gm_.reset(G);
        return G;
    }

    int cmd_analyze() {
        wzk_bracket* b = bracket();
        auto fo = frame_options();
        wzk_verdict fv, rv;
        char *fj = nullptr, *rj = nullptr;
        check(wzk_frame_bounds(b, &fo, &fv, &fj), "frame_bounds");
        json frame = json::parse(take(fj));
        check(wzk_riesz_bounds(b, &fo, &rv, &rj), "riesz_bounds");
        json riesz = json::parse(take(rj));
        int ortho = 0;
        check(wzk_orthonormality_check(b, c_.ortho_tol, &ortho), "orthonormality_check");
        wzk_verdict verdict = fv;
        if (rv == WZK_RIESZ_SEQUENCE || rv == WZK_ORTHONORMAL_SYSTEM) verdict = rv;
        if (verdict == WZK_RIESZ_SEQUENCE && ortho) verdict = WZK_ORTHONORMAL_SYSTEM;
        report_["bracket"] = bracket_summary(b);
        report_["frame"] = frame;
        report_["riesz"] = riesz;
        report_["orthonormal"] = ortho != 0;
        if (n_ == 1) {
            int sch = 0;
            char* aj = nullptr;
            check(wzk_a2_constant(b, c_.a2_depth, c_.a2_floor_rel, &sch, &aj), "a2_constant");
            report_["a2"] = json::parse(take(aj));
            report_["schauder_basis"] = sch != 0;
        } else {
            report_["a2"] = nullptr;
            report_["schauder_basis"] = nullptr;
        }
        report_["verdict"] = wzk_verdict_name(verdict);
        if (c_.oracle) oracle_into(report_);
        if (wants("csv") && n_ == 1) check(wzk_bracket_write_csv(b, path("bracket.csv").c_str(), comment().c_str()), "write");
        std::cout << "verdict: " << wzk_verdict_name(verdict) << "\n"
                  << "frame bounds: A=" << frame.value("A", 0.0) << " B=" << frame.value("B", 0.0) << "\n"
                  << "riesz bounds: A=" << riesz.value("A", 0.0) << " B=" << riesz.value("B", 0.0) << "\n";
        if (n_ == 1)
            std::cout << "A2 constant: " << report_["a2"].value("C", 0.0)
                      << (report_["schauder_basis"].get<bool>() ? " (Schauder basis)" : " (not a Schauder basis)") << "\n";
        if (c_.oracle)
            std::cout << "gram oracle: " << (report_["oracle_agrees"].get<bool>() ? "agrees" : "DISAGREES") << "\n";
        return 0;
    }

    int cmd_dualize() {
        wzk_bracket* b = bracket();
        int exists = 0;
        char* dj = nullptr;
        check(wzk_dual_report(b, c_.tau_rel, &exists, &dj), "dual_existence");
        report_["dual"] = json::parse(take(dj));
        if (!exists) {
            report_["verdict"] = "NoDualExists";
            std::cout << "NoDualExists: integral of 1/[phi,phi] diverges (growth "
                      << report_["dual"].value("growth", 0.0) << ")\n";
            return 2;
        }
        wzk_zak* d = nullptr;
        wzk_status s = wzk_dualize(zak(), b, c_.tau_rel, &d);
        if (s == WZK_ERR_NO_DUAL) {
            report_["verdict"] = "NoDualExists";
            report_["error"] = wzk_last_error();
            return 2;
        }
        check(s, "dualize");
        Zak dual(d);
        wzk_bracket* cross = nullptr;
        check(wzk_bracket_compute(d, zak(), &cross), "bracket");
        Bracket keep(cross);
        double dev = 0;
        check(wzk_bracket_max_deviation_from_one(cross, &dev), "bracket");
        report_["verdict"] = "DualExists";
        report_["biorthogonality_deviation"] = dev;
        if (wants("bin"))
            check(wzk_zak_write(d, path("dual_zak.bin").c_str(), "bin", 0, provenance("dual_zak").c_str()), "write");
        std::cout << "dual exists; max |[dual,phi] - 1| = " << dev << "\n";
        return 0;
    }

    int cmd_orthonormalize() {
        wzk_bracket* b = bracket();
        wzk_zak* o = nullptr;
        wzk_status s = wzk_orthonormalize(zak(), b, c_.tau_rel, &o);
        if (s == WZK_ERR_NOT_RIESZ) {
            report_["verdict"] = "NotRiesz";
            report_["error"] = wzk_last_error();
            std::cout << "NotRiesz: " << wzk_last_error() << "\n";
            return 2;
        }
        check(s, "orthonormalize");
        Zak keep(o);
        wzk_bracket* ob = nullptr;
        check(wzk_bracket_compute(o, o, &ob), "bracket");
        Bracket keepb(ob);
        double dev = 0;
        check(wzk_bracket_max_deviation_from_one(ob, &dev), "bracket");
        report_["verdict"] = "Orthonormalized";
        report_["orthonormality_deviation"] = dev;
        if (wants("bin"))
            check(wzk_zak_write(o, path("orthonormal_zak.bin").c_str(), "bin", 0, provenance("orthonormal_zak").c_str()),
                  "write");
        std::cout << "orthonormalized; max |[phi#,phi#] - 1| = " << dev << "\n";
        return 0;
    }

    int cmd_member() {
        wzk_bracket* b = bracket();
        Zak zf;
        json desc;
        if (c_.member.contains("function")) {
            wzk_generator* fg = nullptr;
            check(wzk_generator_from_json(c_.member["function"].dump().c_str(), &fg), "member.function");
            Generator keep(fg);
            wzk_kernel* fk = nullptr;
            auto o = kernel_options();
            check(wzk_weyl_kernel(fg, &o, &fk), "weyl_kernel(member)");
            Kernel keepk(fk);
            wzk_zak* z = nullptr;
            auto zo = zak_options();
            check(wzk_zak_forward(fk, &zo, &z), "zak_forward(member)");
            zf.reset(z);
            desc = {{"function", c_.member["function"]}};
        } else {
            std::vector<long> k(n_), l(n_);
            const json& t = c_.member.value("translate", json("random"));
            if (t.is_string() && t.get<std::string>() == "random") {
                std::mt19937_64 rng(static_cast<std::uint64_t>(seed_));
                std::uniform_int_distribution<long> d(-3, 3);
                for (std::size_t i = 0; i < n_; ++i) k[i] = d(rng), l[i] = d(rng);
            } else if (t.is_object()) {
                k = get_or(t, "k", k);
                l = get_or(t, "l", l);
                if (k.size() != n_ || l.size() != n_) input_error("member.translate k/l must have length n");
            } else {
                input_error("member.translate must be \"random\" or {\"k\":[..],\"l\":[..]}");
            }
            wzk_kernel* tk = nullptr;
            check(wzk_kernel_twisted_translate(kernel(), k.data(), l.data(), n_, &tk), "kernel_twisted_translate");
            Kernel keep(tk);
            wzk_zak* z = nullptr;
            auto zo = zak_options();
            check(wzk_zak_forward(tk, &zo, &z), "zak_forward(member)");
            zf.reset(z);
            desc = {{"translate", {{"k", k}, {"l", l}}}};
        }
        int member = 0;
        char* mj = nullptr;
        check(wzk_membership(zf.get(), zak(), b, c_.member_tol, c_.tau_rel, &member, &mj), "membership");
        report_["member_input"] = desc;
        report_["membership"] = json::parse(take(mj));
        report_["verdict"] = member ? "Member" : "NotMember";
        std::cout << (member ? "member" : "not a member") << " (residual "
                  << report_["membership"].value("residual", 0.0) << ")\n";
        return 0;
    }

    int cmd_gram() {
        wzk_gram* G = gram();
        char* gj = nullptr;
        check(wzk_gram_json(G, &gj), "gram_json");
        report_["gram"] = json::parse(take(gj));
        report_["finite_sections"] = gram_section_trace(G);
        if (wants("bin")) check(wzk_gram_write_bin(G, path("gram.bin").c_str(), provenance("gram").c_str()), "write");
        const json& last = report_["finite_sections"].back();
        std::cout << "gram R=" << c_.box_radius << ": A_est=" << last["A_est"] << " B_est=" << last["B_est"] << "\n";
        return 0;
    }

    int cmd_crosscheck() {
        oracle_into(report_);
        bool pass = report_["oracle_agrees"].get<bool>();
        report_["verdict"] = pass ? "Agree" : "Disagree";
        std::cout << "crosscheck: " << (pass ? "pass" : "FAIL") << " max deviation "
                  << report_["oracle"].value("max_deviation", 0.0) << "\n";
        return pass ? 0 : 2;
    }

    Config c_;
    std::string command_;
    long seed_;
    std::string hash_;
    json report_;
    Generator gen_{nullptr};
    std::size_t n_ = 1;
    Kernel Kplain_{nullptr};
    Kernel K_{nullptr};
    Zak Z_{nullptr};
    Bracket B_{nullptr};
    Grid G_{nullptr};
    Gram Gm_{nullptr};
};

int run_command(const std::string& command, const std::string& config_path, std::optional<std::string> out,
                std::optional<std::string> format, long seed, int threads) {
    Config c = load_config(config_path);
    if (out) c.out_dir = *out;
    if (format) c.formats = {"json", *format};
    check_formats(c.formats);
    if (threads > 0) wzk_set_threads(threads);

    json hashed = c.raw;
    if (hashed.contains("outputs")) hashed["outputs"].erase("directory");
    hashed["generator"] = c.generator;
    hashed["seed"] = seed;
    hashed["formats"] = c.formats;
    std::string hash = sha256_hex(hashed.dump());

    prepare_out_dir(c.out_dir);
    Run run(std::move(c), command, seed, hash);
    return run.execute();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"wzk: Weyl-Zak frame analysis of twisted lattice translates"};
    app.require_subcommand(1, 1);
    std::string config;
    std::string out, format;
    long seed = 0;
    int threads = 0;

    const std::vector<std::pair<const char*, const char*>> commands = {
        {"kernel", "sample the Weyl kernel of the generator"},
        {"zak", "compute the Weyl-Zak transform"},
        {"bracket", "compute the self bracket [phi,phi]"},
        {"analyze", "frame, Riesz, orthonormal and A2 analysis"},
        {"dualize", "construct the biorthogonal generator"},
        {"orthonormalize", "construct the orthonormalized generator"},
        {"member", "test membership in the twisted shift-invariant space"},
        {"gram", "brute-force Gram matrix and finite-section bounds"},
        {"crosscheck", "compare Gram entries with bracket Fourier coefficients"},
    };
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config, "analysis config (JSON)")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out, "output directory (overrides outputs.directory)");
        sub->add_option("--format", format, "extra artifact format")->check(CLI::IsMember({"json", "csv", "bin"}));
        sub->add_option("--seed", seed, "seed for randomized fixtures");
        sub->add_option("--threads", threads, "worker threads (0 = hardware)")->check(CLI::NonNegativeNumber);
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }
    std::string command = app.get_subcommands().front()->get_name();
    try {
        return run_command(command, config, out.empty() ? std::nullopt : std::optional<std::string>(out),
                           format.empty() ? std::nullopt : std::optional<std::string>(format), seed, threads);
    } catch (const Failure& f) {
        std::cerr << "wzk " << command << ": " << f.message << "\n";
        return f.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "wzk " << command << ": " << e.what() << "\n";
        return 1;
    }
}
