#include "weylzak/weylzak.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "weylzak/io.hpp"
#include "weylzak/parallel.hpp"

struct wzk_generator { wz::GeneratorSpec spec; };
struct wzk_kernel { wz::SampledKernel K; };
struct wzk_grid { wz::Grid2n g; };
struct wzk_zak { wz::ZakField Z; };
struct wzk_bracket { wz::BracketTable B; };
struct wzk_gram { wz::GramMatrix G; };

namespace {

thread_local std::string last_error;

template <class F>
wzk_status guard(F&& f) {
    try {
        last_error.clear();
        f();
        return WZK_OK;
    } catch (const wz::Error& e) {
        last_error = e.what();
        return static_cast<wzk_status>(e.status());
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return WZK_ERR_INTERNAL;
    } catch (const std::exception& e) {
        last_error = e.what();
        return WZK_ERR_INTERNAL;
    } catch (...) {
        last_error = "unknown error";
        return WZK_ERR_INTERNAL;
    }
}

void need(const void* p, const char* what) {
    if (!p) throw wz::Error(wz::Status::invalid_argument, std::string("null argument: ") + what);
}

char* dup(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

wz::LatticePoint point(const long* kk, const long* ll, std::size_t n) {
    if (n == 0) throw wz::Error(wz::Status::invalid_argument, "lattice point of dimension 0");
    need(kk, "k");
    need(ll, "l");
    return wz::LatticePoint(std::vector<long>(kk, kk + n), std::vector<long>(ll, ll + n));
}

std::string prov(const char* p) { return p ? std::string(p) : std::string("{}"); }

int verdict_code(wz::Verdict v) { return static_cast<int>(v); }

wz::FrameOptions frame_opts(const wzk_frame_options* o) {
    wz::FrameOptions f;
    if (o) {
        f.tau_rel = o->tau_rel;
        f.ortho_tol = o->ortho_tol;
        f.refinement_tol = o->refinement_tol;
    }
    return f;
}

}  // namespace

extern "C" {

const char* wzk_last_error(void) { return last_error.c_str(); }

const char* wzk_status_name(wzk_status s) {
    switch (s) {
        case WZK_OK: return "ok";
        case WZK_ERR_INVALID_ARGUMENT: return "invalid_argument";
        case WZK_ERR_DIMENSION: return "dimension_mismatch";
        case WZK_ERR_COMMENSURABILITY: return "commensurability";
        case WZK_ERR_WINDOW: return "window";
        case WZK_ERR_GRID_MISMATCH: return "grid_mismatch";
        case WZK_ERR_NYQUIST: return "nyquist";
        case WZK_ERR_ZERO_GENERATOR: return "zero_generator";
        case WZK_ERR_INSUFFICIENT_DECAY: return "insufficient_decay";
        case WZK_ERR_NO_DUAL: return "no_dual";
        case WZK_ERR_NOT_RIESZ: return "not_riesz";
        case WZK_ERR_CORRUPTED: return "corrupted";
        case WZK_ERR_IO: return "io";
        case WZK_ERR_PARSE: return "parse";
        case WZK_ERR_PADDING: return "padding";
        case WZK_ERR_INTERNAL: return "internal";
    }
    return "unknown";
}

const char* wzk_verdict_name(wzk_verdict v) {
    switch (v) {
        case WZK_FRAME_SEQUENCE: return "FrameSequence";
        case WZK_RIESZ_SEQUENCE: return "RieszSequence";
        case WZK_ORTHONORMAL_SYSTEM: return "OrthonormalSystem";
        case WZK_NOT_FRAME: return "NotFrame";
        case WZK_INCONCLUSIVE: return "Inconclusive";
    }
    return "unknown";
}

void wzk_set_threads(int threads) { wz::set_threads(threads); }

void wzk_string_free(char* s) { std::free(s); }

wzk_status wzk_generator_from_json(const char* json, wzk_generator** out) {
    return guard([&] {
        need(json, "json");
        need(out, "out");
        *out = new wzk_generator{wz::GeneratorSpec::from_json(json)};
    });
}

void wzk_generator_free(wzk_generator* g) { delete g; }

wzk_status wzk_generator_dim(const wzk_generator* g, size_t* n) {
    return guard([&] {
        need(g, "generator");
        need(n, "n");
        *n = wz::materialize(g->spec).dim();
    });
}

wzk_status wzk_generator_has_function(const wzk_generator* g, int* has) {
    return guard([&] {
        need(g, "generator");
        need(has, "has");
        auto m = wz::materialize(g->spec);
        int ok = 1;
        for (const auto& f : m.factors)
            if (!f.function && !f.sampled_function) ok = 0;
        *has = ok;
    });
}

void wzk_kernel_options_default(wzk_kernel_options* o) {
    if (!o) return;
    *o = wzk_kernel_options{};
    o->truncation = 8;
    o->eta_half_width = 8.0;
    o->xi_per_unit = 32;
    o->eta_per_unit = 32;
}

wzk_status wzk_weyl_kernel(const wzk_generator* g, const wzk_kernel_options* o, wzk_kernel** out) {
    return guard([&] {
        need(g, "generator");
        need(o, "options");
        need(out, "out");
        if (o->xi_per_unit <= 0 || o->eta_per_unit <= 0)
            throw wz::Error(wz::Status::invalid_argument, "grid resolutions must be positive");
        if (o->truncation < 0) throw wz::Error(wz::Status::invalid_argument, "truncation must be >= 0");
        auto w = wz::KernelWindow::standard(o->truncation, o->eta_half_width, o->xi_per_unit, o->eta_per_unit);
        if (o->xi_hi > o->xi_lo) w.xi = wz::Axis::midpoints(o->xi_lo, o->xi_hi, o->xi_per_unit);
        if (o->eta_hi > o->eta_lo) w.eta = wz::Axis::midpoints(o->eta_lo, o->eta_hi, o->eta_per_unit);
        w.quad_nodes = o->quad_nodes;
        w.force_quadrature = o->force_quadrature != 0;
        *out = new wzk_kernel{wz::weyl_kernel(g->spec, w)};
    });
}

void wzk_kernel_free(wzk_kernel* k) { delete k; }

wzk_status wzk_kernel_hs_norm(const wzk_kernel* k, double* out) {
    return guard([&] {
        need(k, "kernel");
        need(out, "out");
        *out = wz::hs_norm(k->K);
    });
}

wzk_status wzk_kernel_tail_mass(const wzk_kernel* k, double* out) {
    return guard([&] {
        need(k, "kernel");
        need(out, "out");
        *out = k->K.tail_mass;
    });
}

wzk_status wzk_kernel_twisted_translate(const wzk_kernel* k, const long* kk, const long* ll, size_t n,
                                        wzk_kernel** out) {
    return guard([&] {
        need(k, "kernel");
        need(out, "out");
        *out = new wzk_kernel{wz::kernel_twisted_translate(k->K, point(kk, ll, n))};
    });
}

wzk_status wzk_kernel_compose(const wzk_kernel* a, const wzk_kernel* b, wzk_kernel** out) {
    return guard([&] {
        need(a, "a");
        need(b, "b");
        need(out, "out");
        *out = new wzk_kernel{wz::kernel_compose(a->K, b->K)};
    });
}

wzk_status wzk_kernel_to_function(const wzk_kernel* k, long x_per_unit, double tail_tol, wzk_grid** out) {
    return guard([&] {
        need(k, "kernel");
        need(out, "out");
        wz::InversionOptions o;
        o.x_per_unit = x_per_unit;
        o.tail_tol = tail_tol;
        *out = new wzk_grid{wz::kernel_to_function(k->K, o)};
    });
}

wzk_status wzk_kernel_info_json(const wzk_kernel* k, char** out) {
    return guard([&] {
        need(k, "kernel");
        need(out, "out");
        *out = dup(wz::io::kernel_info_json(k->K));
    });
}

wzk_status wzk_kernel_write(const wzk_kernel* k, const char* path, const char* format, const char* provenance) {
    return guard([&] {
        need(k, "kernel");
        need(path, "path");
        std::string f = format ? format : "bin";
        if (f == "bin")
            wz::io::write_kernel_bin(k->K, path, prov(provenance));
        else if (f == "csv")
            wz::io::write_kernel_csv(k->K, path, prov(provenance));
        else
            throw wz::Error(wz::Status::invalid_argument, "unknown format '" + f + "'");
    });
}

void wzk_grid_free(wzk_grid* g) { delete g; }

wzk_status wzk_grid_sample(const wzk_generator* g, double lo, double hi, long per_unit, wzk_grid** out) {
    return guard([&] {
        need(g, "generator");
        need(out, "out");
        if (!(hi > lo) || per_unit <= 0) throw wz::Error(wz::Status::invalid_argument, "bad sampling window");
        auto a = wz::Axis::left(lo, hi, per_unit);
        *out = new wzk_grid{wz::sample_function(g->spec, a, a)};
    });
}

wzk_status wzk_grid_pad(const wzk_grid* g, long units, wzk_grid** out) {
    return guard([&] {
        need(g, "grid");
        need(out, "out");
        *out = new wzk_grid{wz::pad(g->g, units)};
    });
}

wzk_status wzk_grid_l2_norm(const wzk_grid* g, double* out) {
    return guard([&] {
        need(g, "grid");
        need(out, "out");
        *out = wz::l2_norm(g->g);
    });
}

wzk_status wzk_grid_edge_mass(const wzk_grid* g, double* out) {
    return guard([&] {
        need(g, "grid");
        need(out, "out");
        *out = g->g.edge_mass;
    });
}

wzk_status wzk_grid_write(const wzk_grid* g, const char* path, const char* provenance) {
    return guard([&] {
        need(g, "grid");
        need(path, "path");
        wz::io::write_grid_bin(g->g, path, prov(provenance));
    });
}

void wzk_zak_options_default(wzk_zak_options* o) {
    if (!o) return;
    *o = wzk_zak_options{};
    o->truncation = 8;
    o->fast = 1;
}

wzk_status wzk_zak_forward(const wzk_kernel* k, const wzk_zak_options* o, wzk_zak** out) {
    return guard([&] {
        need(k, "kernel");
        need(o, "options");
        need(out, "out");
        wz::ZakOptions z;
        z.M = o->truncation;
        z.n_xi_prime = o->n_xi_prime;
        z.fast = o->fast != 0;
        z.xi_shift = o->xi_shift;
        *out = new wzk_zak{o->half_lattice ? wz::zak_pi_h_forward(k->K, z) : wz::zak_forward(k->K, z)};
    });
}

void wzk_zak_free(wzk_zak* z) { delete z; }

wzk_status wzk_zak_inverse(const wzk_zak* z, wzk_kernel** out) {
    return guard([&] {
        need(z, "zak");
        need(out, "out");
        *out = new wzk_kernel{wz::zak_inverse(z->Z)};
    });
}

wzk_status wzk_zak_translate(const wzk_zak* z, const long* kk, const long* ll, size_t n, wzk_zak** out) {
    return guard([&] {
        need(z, "zak");
        need(out, "out");
        auto p = point(kk, ll, n);
        bool half = !z->Z.factors.empty() && z->Z.factors.front().variant == wz::ZakVariant::half_lattice;
        *out = new wzk_zak{half ? wz::zak_pi_h_translate(z->Z, p) : wz::zak_translate(z->Z, p)};
    });
}

wzk_status wzk_zak_norm(const wzk_zak* z, double* out) {
    return guard([&] {
        need(z, "zak");
        need(out, "out");
        *out = wz::zak_norm(z->Z);
    });
}

wzk_status wzk_zak_discarded_mass(const wzk_zak* z, double* out) {
    return guard([&] {
        need(z, "zak");
        need(out, "out");
        *out = z->Z.discarded_mass;
    });
}

wzk_status wzk_zak_zero_band(const wzk_zak* z, double lo, double hi, wzk_zak** out) {
    return guard([&] {
        need(z, "zak");
        need(out, "out");
        if (!(hi > lo)) throw wz::Error(wz::Status::invalid_argument, "empty band");
        auto r = std::make_unique<wzk_zak>(*z);
        for (auto& P : r->Z.factors)
            for (std::size_t q = 0; q < P.xi_prime.count; ++q) {
                double v = P.xi_prime.node(q);
                if (v < lo || v >= hi) continue;
                for (std::size_t i = 0; i < P.xi.count; ++i)
                    for (std::size_t j = 0; j < P.eta.count; ++j) P.at(i, q, j) = 0.0;
            }
        r->Z.provenance += " zero_band[" + std::to_string(lo) + "," + std::to_string(hi) + ")";
        *out = r.release();
    });
}

wzk_status wzk_zak_info_json(const wzk_zak* z, char** out) {
    return guard([&] {
        need(z, "zak");
        need(out, "out");
        *out = dup(wz::io::zak_info_json(z->Z));
    });
}

wzk_status wzk_zak_write(const wzk_zak* z, const char* path, const char* format, double slice,
                         const char* provenance) {
    return guard([&] {
        need(z, "zak");
        need(path, "path");
        std::string f = format ? format : "bin";
        if (f == "bin") {
            wz::io::write_zak_bin(z->Z, path, prov(provenance));
        } else if (f == "csv") {
            std::string base = path;
            wz::io::write_zak_csv_eta(z->Z, slice, base + "_eta.csv", prov(provenance));
            wz::io::write_zak_csv_xi_prime(z->Z, 0.0, base + "_xiprime.csv", prov(provenance));
        } else {
            throw wz::Error(wz::Status::invalid_argument, "unknown format '" + f + "'");
        }
    });
}

wzk_status wzk_bracket_compute(const wzk_zak* z1, const wzk_zak* z2, wzk_bracket** out) {
    return guard([&] {
        need(z1, "z1");
        need(z2, "z2");
        need(out, "out");
        *out = new wzk_bracket{z1 == z2 ? wz::bracket_self(z1->Z) : wz::bracket(z1->Z, z2->Z)};
    });
}

void wzk_bracket_free(wzk_bracket* b) { delete b; }

wzk_status wzk_bracket_fourier_coeff(const wzk_bracket* b, const long* kk, const long* ll, size_t n, double* re,
                                     double* im) {
    return guard([&] {
        need(b, "bracket");
        need(re, "re");
        need(im, "im");
        auto c = wz::bracket_fourier_coeff(b->B, point(kk, ll, n));
        *re = c.real();
        *im = c.imag();
    });
}

wzk_status wzk_bracket_translate_left(const wzk_bracket* b, const long* kk, const long* ll, size_t n,
                                      wzk_bracket** out) {
    return guard([&] {
        need(b, "bracket");
        need(out, "out");
        *out = new wzk_bracket{wz::bracket_translate_left(b->B, point(kk, ll, n))};
    });
}

wzk_status wzk_bracket_translate_right(const wzk_bracket* b, const long* kk, const long* ll, size_t n,
                                       wzk_bracket** out) {
    return guard([&] {
        need(b, "bracket");
        need(out, "out");
        *out = new wzk_bracket{wz::bracket_translate_right(b->B, point(kk, ll, n))};
    });
}

wzk_status wzk_bracket_orthogonal(const wzk_bracket* b, double tol, int* out) {
    return guard([&] {
        need(b, "bracket");
        need(out, "out");
        *out = wz::orthogonality_test(b->B, tol) ? 1 : 0;
    });
}

wzk_status wzk_bracket_max_deviation_from_one(const wzk_bracket* b, double* out) {
    return guard([&] {
        need(b, "bracket");
        need(out, "out");
        double m = 0;
        for (double v : wz::real_values(b->B)) m = std::max(m, std::abs(v - 1.0));
        *out = m;
    });
}

wzk_status wzk_bracket_summary_json(const wzk_bracket* b, double tau_rel, char** out) {
    return guard([&] {
        need(b, "bracket");
        need(out, "out");
        *out = dup(wz::io::bracket_summary_json(b->B, tau_rel));
    });
}

wzk_status wzk_bracket_write_csv(const wzk_bracket* b, const char* path, const char* comment) {
    return guard([&] {
        need(b, "bracket");
        need(path, "path");
        wz::io::write_bracket_csv(b->B, path, comment ? comment : "");
    });
}

void wzk_frame_options_default(wzk_frame_options* o) {
    if (!o) return;
    wz::FrameOptions f;
    o->tau_rel = f.tau_rel;
    o->ortho_tol = f.ortho_tol;
    o->refinement_tol = f.refinement_tol;
}

wzk_status wzk_frame_bounds(const wzk_bracket* b, const wzk_frame_options* o, wzk_verdict* verdict, char** json) {
    return guard([&] {
        need(b, "bracket");
        auto r = wz::frame_bounds(b->B, frame_opts(o));
        if (verdict) *verdict = static_cast<wzk_verdict>(verdict_code(r.verdict));
        if (json) *json = dup(wz::io::frame_report_json(r));
    });
}

wzk_status wzk_riesz_bounds(const wzk_bracket* b, const wzk_frame_options* o, wzk_verdict* verdict, char** json) {
    return guard([&] {
        need(b, "bracket");
        auto r = wz::riesz_bounds(b->B, frame_opts(o));
        if (verdict) *verdict = static_cast<wzk_verdict>(verdict_code(r.verdict));
        if (json) *json = dup(wz::io::frame_report_json(r));
    });
}

wzk_status wzk_orthonormality_check(const wzk_bracket* b, double tol, int* out) {
    return guard([&] {
        need(b, "bracket");
        need(out, "out");
        *out = wz::orthonormality_check(b->B, tol) ? 1 : 0;
    });
}

wzk_status wzk_dual_report(const wzk_bracket* b, double tau_rel, int* exists, char** json) {
    return guard([&] {
        need(b, "bracket");
        auto r = wz::dual_existence(b->B, tau_rel);
        if (exists) *exists = r.exists ? 1 : 0;
        if (json) *json = dup(wz::io::dual_report_json(r));
    });
}

wzk_status wzk_dualize(const wzk_zak* z, const wzk_bracket* b, double tau_rel, wzk_zak** out) {
    return guard([&] {
        need(z, "zak");
        need(b, "bracket");
        need(out, "out");
        *out = new wzk_zak{wz::dualize(z->Z, b->B, tau_rel)};
    });
}

wzk_status wzk_orthonormalize(const wzk_zak* z, const wzk_bracket* b, double tau_rel, wzk_zak** out) {
    return guard([&] {
        need(z, "zak");
        need(b, "bracket");
        need(out, "out");
        *out = new wzk_zak{wz::orthonormalize(z->Z, b->B, tau_rel)};
    });
}

wzk_status wzk_membership(const wzk_zak* zf, const wzk_zak* zphi, const wzk_bracket* bphi, double tol,
                          double tau_rel, int* member, char** json) {
    return guard([&] {
        need(zf, "zf");
        need(zphi, "zphi");
        need(bphi, "bphi");
        auto m = wz::membership_multiplier(zf->Z, zphi->Z, bphi->B, tol, tau_rel);
        if (member) *member = m.member ? 1 : 0;
        if (json) *json = dup(wz::io::membership_json(m));
    });
}

wzk_status wzk_a2_constant(const wzk_bracket* b, int depth, double floor_rel, int* schauder, char** json) {
    return guard([&] {
        need(b, "bracket");
        wz::A2Options o;
        o.depth = depth;
        o.floor_rel = floor_rel;
        auto r = wz::a2_constant(b->B, o);
        if (schauder) *schauder = r.schauder ? 1 : 0;
        if (json) *json = dup(wz::io::a2_report_json(r));
    });
}

wzk_status wzk_gram_matrix(const wzk_grid* g, int radius, wzk_gram** out) {
    return guard([&] {
        need(g, "grid");
        need(out, "out");
        *out = new wzk_gram{wz::gram_matrix(g->g, radius)};
    });
}

void wzk_gram_free(wzk_gram* g) { delete g; }

wzk_status wzk_gram_section(const wzk_gram* g, int radius, wzk_gram** out) {
    return guard([&] {
        need(g, "gram");
        need(out, "out");
        *out = new wzk_gram{wz::gram_section(g->G, radius)};
    });
}

wzk_status wzk_gram_bounds(const wzk_gram* g, double* a, double* b) {
    return guard([&] {
        need(g, "gram");
        auto r = wz::gram_bounds(g->G);
        if (a) *a = r.A;
        if (b) *b = r.B;
    });
}

wzk_status wzk_gram_json(const wzk_gram* g, char** out) {
    return guard([&] {
        need(g, "gram");
        need(out, "out");
        *out = dup(wz::io::gram_json(g->G));
    });
}

wzk_status wzk_gram_write_bin(const wzk_gram* g, const char* path, const char* provenance) {
    return guard([&] {
        need(g, "gram");
        need(path, "path");
        wz::io::write_gram_bin(g->G, path, prov(provenance));
    });
}

wzk_status wzk_cross_validate(const wzk_gram* g, const wzk_bracket* b, double tol, int* pass, char** json) {
    return guard([&] {
        need(g, "gram");
        need(b, "bracket");
        auto r = wz::cross_validate(g->G, b->B, tol);
        if (pass) *pass = r.pass ? 1 : 0;
        if (json) *json = dup(wz::io::cross_report_json(r));
    });
}

}  // extern "C"
