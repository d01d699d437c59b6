#pragma once

#include <cstddef>
#include <functional>

namespace wz {

void set_threads(int n);
int threads();

// Runs body(i) for i in [0, n). Each index is processed by exactly one worker, so
// results that are written per index do not depend on the schedule.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace wz
