#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "weylzak/common.hpp"

namespace wz {

struct LatticePoint {
    std::vector<long> k;
    std::vector<long> l;

    LatticePoint() = default;
    LatticePoint(std::vector<long> k_, std::vector<long> l_);
    static LatticePoint of(long k, long l) { return LatticePoint({k}, {l}); }
    static LatticePoint zero(std::size_t n) { return LatticePoint(std::vector<long>(n, 0), std::vector<long>(n, 0)); }

    std::size_t dim() const { return k.size(); }
    bool is_zero() const;
    LatticePoint operator+(const LatticePoint& o) const;
    LatticePoint operator-(const LatticePoint& o) const;
    LatticePoint operator-() const;
    bool operator==(const LatticePoint& o) const = default;
};

// Integer k.l' - l.k' of the composition law.
long long symplectic(const LatticePoint& p, const LatticePoint& q);
long long dot_kl(const LatticePoint& p);

// e^{-pi i (p.k.q.l - p.l.q.k)}, always exactly +1 or -1.
cplx cocycle(const LatticePoint& p, const LatticePoint& q);

// Function on R^{2n}; n > 1 only as a separable product of 1-d planes.
struct Grid2n {
    std::vector<FunctionPlane> factors;
    std::string provenance;
    // Set when the x window is exactly one period of a periodised function
    // (output of kernel_to_function); disables the compact-support check.
    bool periodic_x = false;
    // Relative L2 mass in the outermost unit band of the x window.
    double edge_mass = 0.0;

    std::size_t dim() const { return factors.size(); }
    const FunctionPlane& plane() const;
};

double l2_norm(const FunctionPlane& g);
double l2_norm(const Grid2n& g);

FunctionPlane twisted_translate(const FunctionPlane& g, long k, long l);
Grid2n twisted_translate(const Grid2n& g, const LatticePoint& p);

// Zero-extends every factor by `units` on all four sides.
Grid2n pad(const Grid2n& g, long units);

struct GeneratorSpec {
    enum class Kind { indicator_box, exp_kernel, separable, sampled_function, sampled_kernel, twisted_convolution };

    Kind kind = Kind::indicator_box;
    int n = 1;
    std::vector<GeneratorSpec> factors;
    std::shared_ptr<const FunctionPlane> function;
    std::shared_ptr<const KernelPlane> kernel;

    static GeneratorSpec indicator_box() { return {}; }
    static GeneratorSpec exp_kernel();
    static GeneratorSpec separable(std::vector<GeneratorSpec> factors);
    static GeneratorSpec twisted_convolution(GeneratorSpec a, GeneratorSpec b);
    static GeneratorSpec sampled_function(FunctionPlane g);
    static GeneratorSpec sampled_kernel(KernelPlane k);

    static GeneratorSpec from_json(const std::string& text);
    std::string to_json() const;
};

std::string kind_name(GeneratorSpec::Kind kind);

// Evaluators for one 1-d factor.
struct FactorModel {
    GeneratorSpec::Kind kind = GeneratorSpec::Kind::indicator_box;
    std::function<cplx(double, double)> kernel;
    std::function<cplx(double, double)> function;
    // Support box [x_lo, x_hi) x [y_lo, y_hi) of `function`.
    double x_lo = 0, x_hi = 0, y_lo = 0, y_hi = 0;
    std::shared_ptr<const FunctionPlane> sampled_function;
    std::shared_ptr<const KernelPlane> sampled_kernel;
    std::vector<GeneratorSpec> operands;
};

struct Materialized {
    std::vector<FactorModel> factors;

    std::size_t dim() const { return factors.size(); }
    // Product of the factor kernels at split coordinates; requires closed forms.
    cplx kernel(const std::vector<double>& xi, const std::vector<double>& eta) const;
    cplx function(const std::vector<double>& x, const std::vector<double>& y) const;
};

Materialized materialize(const GeneratorSpec& spec);

// Samples a closed-form or sampled-function generator on the given axes (same axes
// for every factor).
Grid2n sample_function(const GeneratorSpec& spec, const Axis& x, const Axis& y);

cplx indicator_kernel(double xi, double eta);
cplx exp_kernel(double xi, double eta);
double sinc(double t);

}  // namespace wz
