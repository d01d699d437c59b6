#pragma once

#include <complex>
#include <cstddef>
#include <memory>

namespace wz::detail {

// Planned 1-d complex DFT of fixed length; run() is safe to call concurrently.
class Dft {
public:
    // sign -1: sum x_r e^{-2 pi i r q / n}; sign +1: the unnormalised inverse.
    Dft(std::size_t n, int sign);
    ~Dft();
    Dft(const Dft&) = delete;
    Dft& operator=(const Dft&) = delete;

    void run(std::complex<double>* in, std::complex<double>* out) const;
    std::size_t size() const { return n_; }

private:
    std::size_t n_;
    void* plan_;
};

}  // namespace wz::detail
