#include "intdim/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "intdim/errors.hpp"

namespace intdim {

namespace {

std::atomic<int> g_workers{0};
thread_local bool t_inside_pool = false;

}  // namespace

int worker_count() {
  const int w = g_workers.load();
  if (w > 0) return w;
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

void set_worker_count(int workers) {
  detail::require(workers >= 1, "workers", "must be at least 1");
  g_workers.store(workers);
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
  const auto threads = std::min<std::size_t>(static_cast<std::size_t>(worker_count()), count);
  if (threads <= 1 || t_inside_pool) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::mutex mutex;
  std::size_t failed_at = count;
  std::exception_ptr failure;
  auto work = [&] {
    t_inside_pool = true;
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mutex);
        if (i < failed_at) {
          failed_at = i;
          failure = std::current_exception();
        }
      }
    }
    t_inside_pool = false;
  };

  std::vector<std::thread> pool;
  pool.reserve(threads - 1);
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace intdim
