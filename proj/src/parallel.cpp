#include "fhist/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace fhist {

namespace {
std::atomic<unsigned> g_max_threads{0};
}

void set_max_threads(unsigned threads) { g_max_threads = threads; }

unsigned max_threads() {
  unsigned cap = g_max_threads.load();
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  return cap == 0 ? hw : cap;
}

unsigned worker_count(std::size_t count, unsigned workers) {
  unsigned w = workers == 0 ? max_threads() : std::min(workers, max_threads());
  if (count < w) w = static_cast<unsigned>(std::max<std::size_t>(count, 1));
  return std::max(1u, w);
}

void parallel_chunks(std::size_t count,
                     const std::function<void(std::size_t, std::size_t, unsigned)>& body,
                     unsigned workers) {
  const unsigned w = worker_count(count, workers);
  if (w == 1) {
    body(0, count, 0);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(w);
  pool.reserve(w);
  for (unsigned t = 0; t < w; ++t) {
    const std::size_t begin = count * t / w;
    const std::size_t end = count * (t + 1) / w;
    pool.emplace_back([&, begin, end, t] {
      try {
        body(begin, end, t);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace fhist
