#pragma once

#include <string>
#include <vector>

#include "weylzak/lattice.hpp"

namespace wz {

struct SampledKernel {
    std::vector<KernelPlane> factors;
    std::string provenance;
    // Relative L2 mass estimated to lie outside the sampled window.
    double tail_mass = 0.0;

    std::size_t dim() const { return factors.size(); }
    const KernelPlane& plane() const;
};

struct KernelWindow {
    Axis xi;
    Axis eta;
    // Midpoint nodes for the x integral; 0 picks a Nyquist-safe count.
    std::size_t quad_nodes = 0;
    // Use quadrature even when a closed-form kernel exists.
    bool force_quadrature = false;
    // Allowed relative mass in the boundary samples of a sampled function.
    double support_tol = 1e-12;

    // xi window [-(M+1), M+2) and eta window [-H, H), both at cell midpoints.
    static KernelWindow standard(int M, double H, long xi_per_unit, long eta_per_unit);
};

SampledKernel weyl_kernel(const GeneratorSpec& spec, const KernelWindow& window);

// Twisted translate of the kernel on the same window. Mass that would leave the window is an error.
KernelPlane kernel_twisted_translate(const KernelPlane& K, long k, long l);
SampledKernel kernel_twisted_translate(const SampledKernel& K, const LatticePoint& p);

KernelPlane kernel_compose(const KernelPlane& a, const KernelPlane& b);
SampledKernel kernel_compose(const SampledKernel& a, const SampledKernel& b);

struct InversionOptions {
    // x samples per unit; 0 picks the smallest count that keeps the inversion exact.
    long x_per_unit = 0;
    double tail_tol = 1e-6;
};

Grid2n kernel_to_function(const SampledKernel& K, const InversionOptions& options = {});

double hs_norm(const KernelPlane& K);
double hs_norm(const SampledKernel& K);

// Relative mass of K in the outermost unit band of its window.
double edge_mass(const KernelPlane& K);

}  // namespace wz
