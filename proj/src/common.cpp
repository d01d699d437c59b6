#include "weylzak/common.hpp"

#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include "weylzak/parallel.hpp"

namespace wz {

long Axis::per_unit() const {
    if (!(step > 0.0) || !std::isfinite(step)) throw Error(Status::invalid_argument, "axis step must be positive");
    const double inv = 1.0 / step;
    const long n = std::lround(inv);
    if (n < 1 || std::abs(static_cast<double>(n) * step - 1.0) > 1e-12)
        throw Error(Status::commensurability, "axis step " + std::to_string(step) + " does not divide 1");
    return n;
}

long Axis::index_of(double x) const {
    const double t = (x - lo) / step;
    const double r = std::nearbyint(t);
    if (std::abs(t - r) > 1e-9) return -1;
    if (r < 0 || r >= static_cast<double>(count)) return -1;
    return static_cast<long>(r);
}

bool Axis::same_as(const Axis& o) const {
    return count == o.count && std::abs(step - o.step) <= 1e-12 * step &&
           std::abs(lo - o.lo) <= 1e-9 * step;
}

Axis Axis::midpoints(double a, double b, long per_unit) {
    if (per_unit < 1 || !(b > a)) throw Error(Status::invalid_argument, "bad axis range");
    Axis ax;
    ax.step = 1.0 / static_cast<double>(per_unit);
    ax.lo = a + 0.5 * ax.step;
    ax.count = static_cast<std::size_t>(std::llround((b - a) * static_cast<double>(per_unit)));
    return ax;
}

Axis Axis::left(double a, double b, long per_unit) {
    Axis ax = midpoints(a, b, per_unit);
    ax.lo = a;
    return ax;
}

std::string describe(const Axis& a) {
    std::ostringstream os;
    os << "[" << a.lo << ", " << a.hi() << ") step " << a.step << " (" << a.count << " nodes)";
    return os.str();
}

namespace {
std::atomic<int> g_threads{1};
}

void set_threads(int n) { g_threads.store(n < 1 ? 1 : n); }
int threads() { return g_threads.load(); }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    const int t = threads();
    if (t <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n || failed.load()) return;
            try {
                body(i);
            } catch (...) {
                if (!failed.exchange(true)) failure = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(t), n);
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace wz
