#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

namespace ibg {

/// Serial runs are the reference path; parallel runs must produce identical results.
enum class ExecutionPolicy { Serial, Parallel };

/// Runs body(i) for i in [0, n). Under Parallel the iterations are spread over
/// OpenMP threads; the first exception thrown by any iteration is rethrown.
template <class Body>
void for_each_index(ExecutionPolicy policy, std::size_t n, Body&& body) {
  if (policy == ExecutionPolicy::Serial || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 1)
  for (long long i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace ibg
