#ifndef SUBORD_PARALLEL_HPP
#define SUBORD_PARALLEL_HPP

// Deterministic data parallelism. Work is cut into fixed chunks that do not depend
// on the worker count; workers pick chunks off a shared counter and each chunk
// writes only its own slot, so reductions done afterwards in chunk order give the
// same bits for any number of workers.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace subord {

/// Worker count from SUBORD_THREADS, else the hardware concurrency (at least 1).
inline int default_worker_count() {
  if (const char* env = std::getenv("SUBORD_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1 && v <= 1024) return static_cast<int>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Calls body(chunk, begin, end) for every chunk of [0, n). Exceptions are rethrown
/// (the one from the lowest chunk index wins).
template <class Body>
void parallel_chunks(std::size_t n, std::size_t chunk, int workers, Body&& body) {
  if (n == 0) return;
  if (chunk == 0) chunk = 1;
  const std::size_t chunks = (n + chunk - 1) / chunk;
  workers = std::max(1, std::min<int>(workers, static_cast<int>(chunks)));
  std::atomic<std::size_t> next{0};
  std::mutex err_mutex;
  std::size_t err_chunk = chunks;
  std::exception_ptr err;
  auto run = [&] {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= chunks) return;
      try {
        body(c, c * chunk, std::min(n, (c + 1) * chunk));
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (c < err_chunk) {
          err_chunk = c;
          err = std::current_exception();
        }
      }
    }
  };
  if (workers == 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (int w = 1; w < workers; ++w) pool.emplace_back(run);
    run();
    for (auto& th : pool) th.join();
  }
  if (err) std::rethrow_exception(err);
}

/// out[i] = fn(i) for i in [0, n), evaluated in parallel.
template <class T, class Fn>
std::vector<T> parallel_map(std::size_t n, int workers, Fn&& fn) {
  std::vector<T> out(n);
  parallel_chunks(n, 1, workers, [&](std::size_t, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) out[i] = fn(i);
  });
  return out;
}

}  // namespace subord

#endif  // SUBORD_PARALLEL_HPP
