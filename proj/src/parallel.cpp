#include "heilbronn/parallel.hpp"

#include <atomic>
#include <exception>
#include <mutex>

namespace heilbronn {

namespace {
std::atomic<unsigned> g_max_threads{0};
}

void set_max_threads(unsigned count) { g_max_threads = count; }

unsigned max_threads() {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned cap = g_max_threads.load();
  return cap == 0 ? hw : std::min(cap, hw);
}

void parallel_chunks(std::size_t n, std::size_t chunk,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& body) {
  if (n == 0) return;
  chunk = std::max<std::size_t>(chunk, 1);
  const std::size_t chunks = chunk_count(n, chunk);
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(max_threads(), chunks));
  auto run = [&](std::size_t c) { body(c * chunk, std::min(n, (c + 1) * chunk), c); };
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) run(c);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      try {
        for (std::size_t c = next++; c < chunks; c = next++) run(c);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = chunks;
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace heilbronn
