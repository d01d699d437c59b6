#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "support.hpp"
#include "weylzak/io.hpp"

using namespace wzt;
namespace fs = std::filesystem;

namespace {

std::string tmp(const std::string& name) {
    auto d = fs::temp_directory_path() / "wzk_io_test";
    fs::create_directories(d);
    return (d / name).string();
}

std::string slurp(const std::string& p) {
    std::ifstream f(p);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("binary round trips") {
    auto K = weyl_kernel(phi2_spec(), unit_window(32));
    io::write_kernel_bin(K, tmp("k.bin"), R"({"config_hash":"abc"})");
    auto K2 = io::read_kernel_bin(tmp("k.bin"));
    REQUIRE(K2.factors.size() == 1);
    CHECK(K2.plane().xi.same_as(K.plane().xi));
    CHECK(K2.plane().eta.same_as(K.plane().eta));
    // complex64 payload
    CHECK(max_diff(K2.plane().values, K.plane().values) < 1e-6 * max_abs(K.plane().values));
    CHECK(io::header_of(tmp("k.bin")).find("abc") != std::string::npos);

    auto Z = zak_forward(K, zak_opts(0, 8));
    io::write_zak_bin(Z, tmp("z.bin"));
    auto Z2 = io::read_zak_bin(tmp("z.bin"));
    CHECK(Z2.plane().M == 0);
    CHECK(Z2.plane().xi_prime.count == 8);
    CHECK(max_diff(Z2.plane().values, Z.plane().values) < 1e-6 * max_abs(Z.plane().values));

    auto ax = Axis::left(-1, 2, 8);
    auto g = sample_function(GeneratorSpec::indicator_box(), ax, ax);
    io::write_grid_bin(g, tmp("g.bin"));
    auto g2 = io::read_grid_bin(tmp("g.bin"));
    CHECK(g2.plane().values == g.plane().values);
    auto spec = GeneratorSpec::from_json(R"({"kind":"sampled_function","file":")" + tmp("g.bin") + R"("})");
    CHECK(spec.kind == GeneratorSpec::Kind::sampled_function);

    auto G = gram_matrix(pad(g, 2), 1);
    io::write_gram_bin(G, tmp("gram.bin"));
    CHECK(io::header_of(tmp("gram.bin")).find("points") != std::string::npos);
}

TEST_CASE("corrupted containers are refused") {
    {
        std::ofstream f(tmp("bad.bin"), std::ios::binary);
        f << "NOTWZK\n";
    }
    CHECK_THROWS_AS(io::read_kernel_bin(tmp("bad.bin")), Error);
    CHECK_THROWS_AS(io::read_kernel_bin(tmp("missing.bin")), Error);
    auto K = weyl_kernel(phi2_spec(), unit_window(8));
    io::write_kernel_bin(K, tmp("trunc.bin"));
    auto size = fs::file_size(tmp("trunc.bin"));
    fs::resize_file(tmp("trunc.bin"), size - 8);
    CHECK_THROWS_AS(io::read_kernel_bin(tmp("trunc.bin")), Error);
}

TEST_CASE("CSV exports") {
    auto K = weyl_kernel(phi2_spec(), unit_window(8));
    io::write_kernel_csv(K, tmp("k.csv"), "hash=1");
    auto text = slurp(tmp("k.csv"));
    CHECK(text.rfind("# hash=1", 0) == 0);
    CHECK(text.find("xi,eta,re,im") != std::string::npos);
    CHECK(std::count(text.begin(), text.end(), '\n') == 2 + 64);

    auto Z = zak_forward(K, zak_opts(0, 4));
    io::write_zak_csv_eta(Z, 0.5, tmp("ze.csv"));
    io::write_zak_csv_xi_prime(Z, 0.0, tmp("zx.csv"));
    auto ze = slurp(tmp("ze.csv"));
    CHECK(std::count(ze.begin(), ze.end(), '\n') >= 32);
    auto B = bracket_self(Z);
    io::write_bracket_csv(B, tmp("b.csv"));
    CHECK(slurp(tmp("b.csv")).find("xi,xi_prime,value") != std::string::npos);
}

TEST_CASE("JSON reports are deterministic") {
    auto B = bracket_self(phi2_zak(64, 8));
    auto a = io::frame_report_json(riesz_bounds(B));
    auto b = io::frame_report_json(riesz_bounds(B));
    CHECK(a == b);
    CHECK(a.find("RieszSequence") != std::string::npos);
    CHECK(io::a2_report_json(a2_constant(B)).find("\"C\"") != std::string::npos);
    CHECK(io::bracket_summary_json(B, 1e-8).find("\"min\"") != std::string::npos);
}

}
