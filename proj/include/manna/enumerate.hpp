#pragma once

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "manna/core.hpp"

namespace manna::detail {

inline Int power_count(int n, int m) {
  Int t = 1;
  for (int j = 0; j < m; ++j) t *= n;
  return t;
}

inline void require_budget(int n, int m, long long budget, const std::string& what) {
  Int needed = power_count(n, m);
  require(needed <= budget, Errc::budget_exceeded,
          what + " needs " + needed.str() + " enumerations, budget is " + std::to_string(budget));
}

// Lexicographically ordered prefixes of assignment vectors: the first
// `depth` items each take a bundle in [0, n). Depth is chosen so that there
// are enough chunks to keep `threads` workers busy.
inline std::vector<std::vector<int>> assignment_prefixes(int m, int n, int threads) {
  int depth = 0;
  long long count = 1;
  while (depth < m && count < 4LL * threads && count * n <= 4096) {
    count *= n;
    ++depth;
  }
  std::vector<std::vector<int>> prefixes;
  std::vector<int> cur(depth, 0);
  while (true) {
    prefixes.push_back(cur);
    int j = depth - 1;
    while (j >= 0 && cur[j] == n - 1) cur[j--] = 0;
    if (j < 0) break;
    ++cur[j];
  }
  if (depth == 0) prefixes.assign(1, {});
  return prefixes;
}

// Runs work(chunk_index) over [0, nchunks); with threads > 1 the chunks are
// claimed from a shared counter. Results must be written per-chunk by the
// caller and merged afterwards in chunk order so the outcome does not depend
// on the schedule.
template <class F>
void run_chunks(int nchunks, int threads, F&& work) {
  if (threads <= 1 || nchunks <= 1) {
    for (int i = 0; i < nchunks; ++i) work(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto body = [&]() {
    while (true) {
      int i = next.fetch_add(1);
      if (i >= nchunks) return;
      try {
        work(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  int nthreads = std::min(threads, nchunks);
  pool.reserve(nthreads);
  for (int t = 0; t < nthreads; ++t) pool.emplace_back(body);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace manna::detail
