#pragma once

#include "weylzak/kernel.hpp"

namespace wz {

enum class ZakVariant { standard, half_lattice };

struct ZakPlane {
    Axis xi;
    Axis xi_prime;
    Axis eta;
    int M = 0;
    ZakVariant variant = ZakVariant::standard;
    std::vector<cplx> values;

    std::size_t index(std::size_t i, std::size_t q, std::size_t j) const {
        return (i * xi_prime.count + q) * eta.count + j;
    }
    cplx at(std::size_t i, std::size_t q, std::size_t j) const { return values[index(i, q, j)]; }
    cplx& at(std::size_t i, std::size_t q, std::size_t j) { return values[index(i, q, j)]; }
};

struct ZakField {
    std::vector<ZakPlane> factors;
    // Relative kernel mass outside the lattice sum plus the kernel's own tail.
    double discarded_mass = 0.0;
    std::string provenance;

    std::size_t dim() const { return factors.size(); }
    const ZakPlane& plane() const;
};

struct ZakOptions {
    int M = 8;
    // 0 selects the next power of two >= 2M+1.
    long n_xi_prime = 0;
    bool fast = true;
    // Evaluate at xi + xi_shift (integer) instead of xi in [0,1).
    int xi_shift = 0;
};

long default_xi_prime(int M);

ZakField zak_forward(const SampledKernel& K, const ZakOptions& options = {});
SampledKernel zak_inverse(const ZakField& Z, bool fast = true);
ZakField zak_translate(const ZakField& Z, const LatticePoint& p);

// Half-lattice transform, xi in [0, 1/2).
ZakField zak_pi_h_forward(const SampledKernel& K, const ZakOptions& options = {});
// Multiplier for the translate by (2k, l).
ZakField zak_pi_h_translate(const ZakField& Z, const LatticePoint& half);

double zak_norm(const ZakPlane& Z);
double zak_norm(const ZakField& Z);

}  // namespace wz
