#ifndef PAT_SRC_PARALLEL_HPP_
#define PAT_SRC_PARALLEL_HPP_

#include <algorithm>
#include <thread>
#include <vector>

namespace pat::internal {

// Runs fn(begin, end) over contiguous row bands. Bands never share output.
template <typename Fn>
void for_each_row_band(int rows, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, std::max(1, rows / 16));
  if (threads <= 1) {
    fn(0, rows);
    return;
  }
  std::vector<std::jthread> workers;
  workers.reserve(threads);
  const int band = (rows + static_cast<int>(threads) - 1) / static_cast<int>(threads);
  for (int begin = 0; begin < rows; begin += band) {
    const int end = std::min(rows, begin + band);
    workers.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
}

}  // namespace pat::internal

#endif  // PAT_SRC_PARALLEL_HPP_
