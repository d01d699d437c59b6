#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "weylzak/bracket.hpp"

namespace wz {

struct GramMatrix {
    Eigen::MatrixXcd G;
    std::vector<LatticePoint> points;
    int R = 0;
    std::string provenance;

    std::size_t dim() const { return points.empty() ? 0 : points.front().dim(); }
    long index_of(const LatticePoint& p) const;
};

// Lattice points of the box |k|,|l| <= R, first factor most significant, k before l.
std::vector<LatticePoint> lattice_box(std::size_t n, int R);

GramMatrix gram_matrix(const Grid2n& g, int R);
// Principal section of G on the smaller box.
GramMatrix gram_section(const GramMatrix& G, int R);

struct GramBounds {
    double A = 0;
    double B = 0;
    double min_eigenvalue = 0;
};

GramBounds gram_bounds(const GramMatrix& G);

struct CrossEntry {
    LatticePoint p;
    cplx gram;
    cplx bracket;
};

struct CrossReport {
    double max_deviation = 0;
    LatticePoint worst;
    bool entries_pass = false;
    GramBounds gram;
    double A_bracket = 0;
    double B_bracket = 0;
    bool bounds_pass = false;
    bool pass = false;
    std::vector<CrossEntry> entries;
};

CrossReport cross_validate(const GramMatrix& G, const BracketTable& B, double tol);

}  // namespace wz
