#include "sememe/data/split.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include <fmt/format.h>

#include "sememe/common/error.hpp"

namespace sememe::data {

SplitIndices split_indices(std::size_t n, std::uint64_t seed) {
  if (n < kMinSplitSize) {
    throw UsageError(fmt::format("need at least {} examples to split, got {}", kMinSplitSize, n));
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  const std::size_t n_train = n * 8 / 10;
  const std::size_t n_dev = n / 10;
  SplitIndices out;
  out.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  out.dev.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train),
                 order.begin() + static_cast<std::ptrdiff_t>(n_train + n_dev));
  out.test.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train + n_dev), order.end());
  return out;
}

}  // namespace sememe::data
