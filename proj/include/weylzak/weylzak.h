#ifndef WEYLZAK_H
#define WEYLZAK_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define WZK_API __attribute__((visibility("default")))
#else
#define WZK_API
#endif

typedef enum wzk_status {
    WZK_OK = 0,
    WZK_ERR_INVALID_ARGUMENT = 1,
    WZK_ERR_DIMENSION = 2,
    WZK_ERR_COMMENSURABILITY = 3,
    WZK_ERR_WINDOW = 4,
    WZK_ERR_GRID_MISMATCH = 5,
    WZK_ERR_NYQUIST = 6,
    WZK_ERR_ZERO_GENERATOR = 7,
    WZK_ERR_INSUFFICIENT_DECAY = 8,
    WZK_ERR_NO_DUAL = 9,
    WZK_ERR_NOT_RIESZ = 10,
    WZK_ERR_CORRUPTED = 11,
    WZK_ERR_IO = 12,
    WZK_ERR_PARSE = 13,
    WZK_ERR_PADDING = 14,
    WZK_ERR_INTERNAL = 99
} wzk_status;

typedef enum wzk_verdict {
    WZK_FRAME_SEQUENCE = 0,
    WZK_RIESZ_SEQUENCE = 1,
    WZK_ORTHONORMAL_SYSTEM = 2,
    WZK_NOT_FRAME = 3,
    WZK_INCONCLUSIVE = 4
} wzk_verdict;

typedef struct wzk_generator wzk_generator;
typedef struct wzk_kernel wzk_kernel;
typedef struct wzk_grid wzk_grid;
typedef struct wzk_zak wzk_zak;
typedef struct wzk_bracket wzk_bracket;
typedef struct wzk_gram wzk_gram;

typedef struct wzk_kernel_options {
    int truncation;          /* M; xi window [-(M+1), M+2) unless xi_hi > xi_lo */
    double eta_half_width;   /* H; eta window [-H, H) unless eta_hi > eta_lo */
    long xi_per_unit;
    long eta_per_unit;
    double xi_lo, xi_hi;
    double eta_lo, eta_hi;
    size_t quad_nodes;
    int force_quadrature;
} wzk_kernel_options;

typedef struct wzk_zak_options {
    int truncation;
    long n_xi_prime; /* 0: next power of two >= 2M+1 */
    int fast;
    int xi_shift;
    int half_lattice;
} wzk_zak_options;

typedef struct wzk_frame_options {
    double tau_rel;
    double ortho_tol;
    double refinement_tol;
} wzk_frame_options;

/* Message of the last failing call on this thread. */
WZK_API const char* wzk_last_error(void);
WZK_API const char* wzk_status_name(wzk_status status);
WZK_API const char* wzk_verdict_name(wzk_verdict verdict);
WZK_API void wzk_set_threads(int threads);
WZK_API void wzk_string_free(char* s);

WZK_API wzk_status wzk_generator_from_json(const char* json, wzk_generator** out);
WZK_API void wzk_generator_free(wzk_generator* g);
WZK_API wzk_status wzk_generator_dim(const wzk_generator* g, size_t* n);
/* 1 when every factor has a closed-form or sampled function representation. */
WZK_API wzk_status wzk_generator_has_function(const wzk_generator* g, int* has);

WZK_API void wzk_kernel_options_default(wzk_kernel_options* o);
WZK_API wzk_status wzk_weyl_kernel(const wzk_generator* g, const wzk_kernel_options* o, wzk_kernel** out);
WZK_API void wzk_kernel_free(wzk_kernel* k);
WZK_API wzk_status wzk_kernel_hs_norm(const wzk_kernel* k, double* out);
WZK_API wzk_status wzk_kernel_tail_mass(const wzk_kernel* k, double* out);
WZK_API wzk_status wzk_kernel_twisted_translate(const wzk_kernel* k, const long* kk, const long* ll, size_t n,
                                                wzk_kernel** out);
WZK_API wzk_status wzk_kernel_compose(const wzk_kernel* a, const wzk_kernel* b, wzk_kernel** out);
WZK_API wzk_status wzk_kernel_to_function(const wzk_kernel* k, long x_per_unit, double tail_tol, wzk_grid** out);
WZK_API wzk_status wzk_kernel_info_json(const wzk_kernel* k, char** out);
/* format: "bin" or "csv" */
WZK_API wzk_status wzk_kernel_write(const wzk_kernel* k, const char* path, const char* format, const char* provenance);

WZK_API void wzk_grid_free(wzk_grid* g);
WZK_API wzk_status wzk_grid_sample(const wzk_generator* g, double lo, double hi, long per_unit, wzk_grid** out);
WZK_API wzk_status wzk_grid_pad(const wzk_grid* g, long units, wzk_grid** out);
WZK_API wzk_status wzk_grid_l2_norm(const wzk_grid* g, double* out);
WZK_API wzk_status wzk_grid_edge_mass(const wzk_grid* g, double* out);
WZK_API wzk_status wzk_grid_write(const wzk_grid* g, const char* path, const char* provenance);

WZK_API void wzk_zak_options_default(wzk_zak_options* o);
WZK_API wzk_status wzk_zak_forward(const wzk_kernel* k, const wzk_zak_options* o, wzk_zak** out);
WZK_API void wzk_zak_free(wzk_zak* z);
WZK_API wzk_status wzk_zak_inverse(const wzk_zak* z, wzk_kernel** out);
WZK_API wzk_status wzk_zak_translate(const wzk_zak* z, const long* kk, const long* ll, size_t n, wzk_zak** out);
WZK_API wzk_status wzk_zak_norm(const wzk_zak* z, double* out);
WZK_API wzk_status wzk_zak_discarded_mass(const wzk_zak* z, double* out);
/* Copy with Z = 0 for xi' in [lo, hi) on every factor. */
WZK_API wzk_status wzk_zak_zero_band(const wzk_zak* z, double lo, double hi, wzk_zak** out);
WZK_API wzk_status wzk_zak_info_json(const wzk_zak* z, char** out);
/* format "bin", or "csv" for slices at eta nearest `slice` and at xi' = 0 (path gets suffixes) */
WZK_API wzk_status wzk_zak_write(const wzk_zak* z, const char* path, const char* format, double slice,
                                 const char* provenance);

/* Passing the same handle twice gives the real self-bracket. */
WZK_API wzk_status wzk_bracket_compute(const wzk_zak* z1, const wzk_zak* z2, wzk_bracket** out);
WZK_API void wzk_bracket_free(wzk_bracket* b);
WZK_API wzk_status wzk_bracket_fourier_coeff(const wzk_bracket* b, const long* kk, const long* ll, size_t n,
                                             double* re, double* im);
WZK_API wzk_status wzk_bracket_translate_left(const wzk_bracket* b, const long* kk, const long* ll, size_t n,
                                              wzk_bracket** out);
WZK_API wzk_status wzk_bracket_translate_right(const wzk_bracket* b, const long* kk, const long* ll, size_t n,
                                               wzk_bracket** out);
WZK_API wzk_status wzk_bracket_orthogonal(const wzk_bracket* b, double tol, int* out);
/* max over nodes of |B - 1| */
WZK_API wzk_status wzk_bracket_max_deviation_from_one(const wzk_bracket* b, double* out);
WZK_API wzk_status wzk_bracket_summary_json(const wzk_bracket* b, double tau_rel, char** out);
WZK_API wzk_status wzk_bracket_write_csv(const wzk_bracket* b, const char* path, const char* comment);

WZK_API void wzk_frame_options_default(wzk_frame_options* o);
WZK_API wzk_status wzk_frame_bounds(const wzk_bracket* b, const wzk_frame_options* o, wzk_verdict* verdict, char** json);
WZK_API wzk_status wzk_riesz_bounds(const wzk_bracket* b, const wzk_frame_options* o, wzk_verdict* verdict, char** json);
WZK_API wzk_status wzk_orthonormality_check(const wzk_bracket* b, double tol, int* out);
WZK_API wzk_status wzk_dual_report(const wzk_bracket* b, double tau_rel, int* exists, char** json);
WZK_API wzk_status wzk_dualize(const wzk_zak* z, const wzk_bracket* b, double tau_rel, wzk_zak** out);
WZK_API wzk_status wzk_orthonormalize(const wzk_zak* z, const wzk_bracket* b, double tau_rel, wzk_zak** out);
WZK_API wzk_status wzk_membership(const wzk_zak* zf, const wzk_zak* zphi, const wzk_bracket* bphi, double tol,
                                  double tau_rel, int* member, char** json);
WZK_API wzk_status wzk_a2_constant(const wzk_bracket* b, int depth, double floor_rel, int* schauder, char** json);

WZK_API wzk_status wzk_gram_matrix(const wzk_grid* g, int radius, wzk_gram** out);
WZK_API void wzk_gram_free(wzk_gram* g);
WZK_API wzk_status wzk_gram_section(const wzk_gram* g, int radius, wzk_gram** out);
WZK_API wzk_status wzk_gram_bounds(const wzk_gram* g, double* a, double* b);
WZK_API wzk_status wzk_gram_json(const wzk_gram* g, char** out);
WZK_API wzk_status wzk_gram_write_bin(const wzk_gram* g, const char* path, const char* provenance);
WZK_API wzk_status wzk_cross_validate(const wzk_gram* g, const wzk_bracket* b, double tol, int* pass, char** json);

#ifdef __cplusplus
}
#endif

#endif
