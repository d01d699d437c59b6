#pragma once

#include <string>

#include "weylzak/frame.hpp"
#include "weylzak/gram.hpp"

namespace wz::io {

// Binary container: "WZKBIN1\n", uint64 LE header length, JSON header, then
// little-endian complex64 pairs for every factor in order.
void write_kernel_bin(const SampledKernel& K, const std::string& path, const std::string& provenance_json = "{}");
void write_zak_bin(const ZakField& Z, const std::string& path, const std::string& provenance_json = "{}");
void write_grid_bin(const Grid2n& g, const std::string& path, const std::string& provenance_json = "{}");
void write_gram_bin(const GramMatrix& G, const std::string& path, const std::string& provenance_json = "{}");

SampledKernel read_kernel_bin(const std::string& path);
ZakField read_zak_bin(const std::string& path);
Grid2n read_grid_bin(const std::string& path);

std::string header_of(const std::string& path);

// CSV exports carry a leading "# key=value" comment line.
void write_kernel_csv(const SampledKernel& K, const std::string& path, const std::string& comment = "");
// Slice at the eta node nearest eta_value (rows xi, xi_prime, re, im).
void write_zak_csv_eta(const ZakField& Z, double eta_value, const std::string& path, const std::string& comment = "");
// Slice at the xi' node nearest xi_prime_value (rows xi, eta, re, im).
void write_zak_csv_xi_prime(const ZakField& Z, double xi_prime_value, const std::string& path,
                            const std::string& comment = "");
void write_bracket_csv(const BracketTable& B, const std::string& path, const std::string& comment = "");

std::string kernel_info_json(const SampledKernel& K);
std::string zak_info_json(const ZakField& Z);
std::string bracket_summary_json(const BracketTable& B, double tau_rel);
std::string frame_report_json(const FrameReport& r);
std::string a2_report_json(const A2Report& r);
std::string dual_report_json(const DualReport& r);
std::string membership_json(const Membership& m);
std::string gram_json(const GramMatrix& G);
std::string gram_bounds_json(const GramBounds& b);
std::string cross_report_json(const CrossReport& r);

}  // namespace wz::io
