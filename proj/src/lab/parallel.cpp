#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "harvest/lab.hpp"

namespace harvest::lab {

unsigned resolve_jobs(std::optional<unsigned> requested) {
  if (requested) {
    if (*requested == 0) throw UsageError("--jobs must be at least 1");
    return *requested;
  }
  if (const char* env = std::getenv("HARVEST_LAB_JOBS"); env && *env) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (*end != '\0' || n < 1 || n > 4096) {
      throw UsageError("HARVEST_LAB_JOBS must be a positive integer, got \"" + std::string(env) + "\"");
    }
    return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& f) {
  const std::size_t workers = std::min<std::size_t>(std::max(1u, jobs), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  const auto work = [&] {
    for (std::size_t i; !failed && (i = next++) < n;) {
      try {
        f(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  pool.clear();
  if (error) std::rethrow_exception(error);
}

}  // namespace harvest::lab
