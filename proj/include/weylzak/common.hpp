#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace wz {

using cplx = std::complex<double>;

enum class Status : int {
    ok = 0,
    invalid_argument = 1,
    dimension_mismatch = 2,
    commensurability = 3,
    window = 4,
    grid_mismatch = 5,
    nyquist = 6,
    zero_generator = 7,
    insufficient_decay = 8,
    no_dual = 9,
    not_riesz = 10,
    corrupted = 11,
    io = 12,
    parse = 13,
    padding = 14,
    internal = 99,
};

class Error : public std::runtime_error {
public:
    Error(Status status, const std::string& what) : std::runtime_error(what), status_(status) {}
    Status status() const noexcept { return status_; }

private:
    Status status_;
};

// Uniform half-open axis: nodes lo + i*step for i in [0, count).
struct Axis {
    double lo = 0.0;
    double step = 1.0;
    std::size_t count = 0;

    double node(std::size_t i) const { return lo + static_cast<double>(i) * step; }
    double hi() const { return lo + static_cast<double>(count) * step; }

    // Number of samples per unit length; throws unless step == 1/N exactly.
    long per_unit() const;

    // Index of the node equal to x (within 1e-9 steps), or -1 when x is not a node
    // or lies outside the axis.
    long index_of(double x) const;

    bool same_as(const Axis& other) const;

    static Axis midpoints(double a, double b, long per_unit);
    static Axis left(double a, double b, long per_unit);
};

std::string describe(const Axis& a);

// One 1-d factor of a function g(x, y) sampled on x.count * y.count nodes, x-major.
struct FunctionPlane {
    Axis x;
    Axis y;
    std::vector<cplx> values;

    cplx at(std::size_t ix, std::size_t iy) const { return values[ix * y.count + iy]; }
    cplx& at(std::size_t ix, std::size_t iy) { return values[ix * y.count + iy]; }
};

// One 1-d factor of a kernel K(xi, eta), xi-major.
struct KernelPlane {
    Axis xi;
    Axis eta;
    std::vector<cplx> values;

    cplx at(std::size_t i, std::size_t j) const { return values[i * eta.count + j]; }
    cplx& at(std::size_t i, std::size_t j) { return values[i * eta.count + j]; }
};

}  // namespace wz
