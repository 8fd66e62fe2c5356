#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace evans {

// Worker cap: EVANS_THREADS if set, else hardware concurrency.
inline int max_threads() {
  if (const char* env = std::getenv("EVANS_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc ? static_cast<int>(hc) : 1;
}

// Run f(0..count-1) on up to max_threads() workers. Results must be written
// into index-addressed slots by the caller, so output order is deterministic.
// The lowest-index exception is rethrown after all workers finish.
template <class F>
void parallel_for(std::size_t count, F&& f) {
  const auto nt = static_cast<std::size_t>(max_threads());
  if (count == 0) return;
  if (nt <= 1 || count == 1) {
    for (std::size_t i = 0; i < count; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        f(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const std::size_t spawn = std::min(nt, count);
  pool.reserve(spawn);
  for (std::size_t t = 0; t < spawn; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace evans
