#pragma once

#include "weylzak/zak.hpp"

namespace wz {

struct BracketPlane {
    Axis xi;
    Axis xi_prime;
    ZakVariant variant = ZakVariant::standard;
    std::vector<cplx> values;

    cplx at(std::size_t i, std::size_t q) const { return values[i * xi_prime.count + q]; }
    cplx& at(std::size_t i, std::size_t q) { return values[i * xi_prime.count + q]; }
};

struct BracketTable {
    std::vector<BracketPlane> factors;
    bool self = false;
    double eta_step = 0.0;
    std::size_t eta_count = 0;
    // ||Z1|| * ||Z2|| of the inputs; the scale used by orthogonality_test.
    double input_scale = 0.0;

    std::size_t dim() const { return factors.size(); }
    const BracketPlane& plane() const;
};

BracketTable bracket(const ZakField& Z1, const ZakField& Z2);
BracketTable bracket_self(const ZakField& Z);

cplx bracket_fourier_coeff(const BracketTable& B, const LatticePoint& p);
BracketTable bracket_translate_left(const BracketTable& B, const LatticePoint& p);
BracketTable bracket_translate_right(const BracketTable& B, const LatticePoint& p);
bool orthogonality_test(const BracketTable& B, double tol);

// Values of a self bracket at every node of the product grid, validated real.
// Throws when an imaginary part exceeds 1e-10 of the table scale.
std::vector<double> real_values(const BracketTable& B);
std::vector<double> real_values(const BracketPlane& B);

struct BracketSummary {
    double min = 0, max = 0, l1 = 0;
    std::vector<std::size_t> argmin, argmax;
    double below_threshold_fraction = 0;
    double threshold = 0;
};

BracketSummary summarize(const BracketTable& B, double tau_rel = 1e-8);

}  // namespace wz
