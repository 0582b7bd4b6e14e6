#pragma once

#include <complex>
#include <cstddef>
#include <functional>

namespace relindex {

/// Sums `chunk_fn(begin, end)` over fixed-size chunks of [0, count).
///
/// Chunks may be evaluated concurrently, but the partial sums are always
/// added in chunk order, so the result is bit-identical for a given
/// `chunk_size` regardless of how many threads ran.
std::complex<double> chunked_sum(
    std::size_t count, std::size_t chunk_size,
    const std::function<std::complex<double>(std::size_t, std::size_t)>& chunk_fn);

/// Number of worker threads used by `chunked_sum` (at least 1).
unsigned worker_count();

}  // namespace relindex
