// Index-parallel map over independent work items. Each item must derive its
// own random stream from its index; results are stored by index, so the
// output does not depend on the thread count or schedule.
#pragma once

#include <cstdint>
#include <exception>
#include <optional>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace riccati {

template <class F>
auto serial_map(std::int64_t n, F&& f) {
  std::vector<decltype(f(std::int64_t{0}))> out;
  out.reserve(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) out.push_back(f(i));
  return out;
}

template <class F>
auto parallel_map(std::int64_t n, F&& f) {
  using T = decltype(f(std::int64_t{0}));
  std::vector<std::optional<T>> slots(static_cast<std::size_t>(n));
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      slots[static_cast<std::size_t>(i)].emplace(f(i));
    } catch (...) {
#pragma omp critical(riccati_parallel_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  std::vector<T> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

inline int worker_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace riccati
