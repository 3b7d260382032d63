#include "percolab/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "percolab/errors.hpp"

namespace percolab {

unsigned resolve_workers(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("PERCOLAB_WORKERS"); env && *env) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1 || v > 4096) {
      throw ConfigError("PERCOLAB_WORKERS must be a positive integer, got '" + std::string(env) + "'");
    }
    return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_blocks(std::uint64_t n, std::uint64_t block_size, unsigned workers,
                     const std::function<void(unsigned, std::uint64_t, std::uint64_t, std::uint64_t)>& body) {
  if (n == 0) return;
  if (block_size == 0) block_size = 1;
  const std::uint64_t blocks = (n + block_size - 1) / block_size;
  const unsigned threads = static_cast<unsigned>(std::min<std::uint64_t>(std::max(1u, workers), blocks));

  std::atomic<std::uint64_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto run = [&](unsigned worker) {
    for (;;) {
      if (failed.load(std::memory_order_relaxed)) return;
      const std::uint64_t b = next.fetch_add(1, std::memory_order_relaxed);
      if (b >= blocks) return;
      const std::uint64_t begin = b * block_size;
      try {
        body(worker, b, begin, std::min(n, begin + block_size));
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
        return;
      }
    }
  };

  if (threads == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads - 1);
    for (unsigned w = 1; w < threads; ++w) pool.emplace_back(run, w);
    run(0);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace percolab
