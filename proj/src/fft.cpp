#include "fft.hpp"

#include <mutex>
#include <vector>

#include <fftw3.h>

namespace wz::detail {

namespace {
std::mutex planner_mutex;
}

Dft::Dft(std::size_t n, int sign) : n_(n), plan_(nullptr) {
    std::vector<std::complex<double>> a(n), b(n);
    std::lock_guard<std::mutex> lock(planner_mutex);
    plan_ = fftw_plan_dft_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(a.data()),
                             reinterpret_cast<fftw_complex*>(b.data()), sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                             FFTW_ESTIMATE | FFTW_UNALIGNED);
}

Dft::~Dft() {
    std::lock_guard<std::mutex> lock(planner_mutex);
    if (plan_) fftw_destroy_plan(static_cast<fftw_plan>(plan_));
}

void Dft::run(std::complex<double>* in, std::complex<double>* out) const {
    fftw_execute_dft(static_cast<fftw_plan>(plan_), reinterpret_cast<fftw_complex*>(in),
                     reinterpret_cast<fftw_complex*>(out));
}

}  // namespace wz::detail
