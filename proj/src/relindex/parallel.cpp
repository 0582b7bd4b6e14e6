#include "relindex/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace relindex {

unsigned worker_count() {
  return std::max(1u, std::thread::hardware_concurrency());
}

std::complex<double> chunked_sum(
    std::size_t count, std::size_t chunk_size,
    const std::function<std::complex<double>(std::size_t, std::size_t)>& chunk_fn) {
  if (count == 0) return {0.0, 0.0};
  chunk_size = std::max<std::size_t>(1, chunk_size);
  const std::size_t n_chunks = (count + chunk_size - 1) / chunk_size;
  std::vector<std::complex<double>> partial(n_chunks);

  const unsigned n_threads =
      static_cast<unsigned>(std::min<std::size_t>(worker_count(), n_chunks));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto work = [&] {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= n_chunks) return;
      const std::size_t begin = c * chunk_size;
      const std::size_t end = std::min(count, begin + chunk_size);
      try {
        partial[c] = chunk_fn(begin, end);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };

  if (n_threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);

  std::complex<double> total{0.0, 0.0};
  for (const auto& p : partial) total += p;
  return total;
}

}  // namespace relindex
