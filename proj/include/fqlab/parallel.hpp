#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace fqlab {

/// Worker count: FQLAB_THREADS if set and positive, else hardware concurrency.
inline std::size_t thread_count() {
  if (const char* env = std::getenv("FQLAB_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<std::size_t>(v);
  }
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

/// Runs fn(chunk_index) for chunk_index in [0, chunks). The first exception in
/// chunk order is rethrown, so failures are reported deterministically.
template <typename Fn>
void parallel_chunks(std::size_t chunks, Fn&& fn) {
  std::vector<std::exception_ptr> errors(chunks);
  const std::size_t workers = std::min(chunks, thread_count());
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) {
      try {
        fn(c);
      } catch (...) {
        errors[c] = std::current_exception();
      }
    }
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t c = w; c < chunks; c += workers) {
          try {
            fn(c);
          } catch (...) {
            errors[c] = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace fqlab
