#pragma once

#include <cstddef>
#include <exception>
#include <vector>

namespace grassmann {

enum class ExecPolicy { serial, openmp };

/// Runs fn(i) for i in [0, count). The serial branch is the reference the
/// OpenMP branch is tested against; callers write results into slot i only,
/// so both branches produce identical output. The first exception in index
/// order is rethrown after the loop.
template <class Fn>
void parallel_for(std::size_t count, ExecPolicy policy, Fn&& fn) {
  if (policy == ExecPolicy::serial) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(count);
  const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

template <class T, class Fn>
std::vector<T> parallel_map(std::size_t count, ExecPolicy policy, Fn&& fn) {
  std::vector<T> out(count);
  parallel_for(count, policy, [&](std::size_t i) { out[i] = fn(i); });
  return out;
}

}  // namespace grassmann
