#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace sememe::data {

inline constexpr std::size_t kMinSplitSize = 10;

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> dev;
  std::vector<std::size_t> test;
};

// Seeded shuffle of 0..n-1 cut into floor(0.8n) / floor(0.1n) / remainder.
// Throws UsageError when n < 10.
SplitIndices split_indices(std::size_t n, std::uint64_t seed);

template <typename T>
struct Partition {
  std::vector<T> train;
  std::vector<T> dev;
  std::vector<T> test;
};

template <typename T>
Partition<T> split_corpus(const std::vector<T>& items, std::uint64_t seed) {
  const auto idx = split_indices(items.size(), seed);
  Partition<T> out;
  for (auto i : idx.train) out.train.push_back(items[i]);
  for (auto i : idx.dev) out.dev.push_back(items[i]);
  for (auto i : idx.test) out.test.push_back(items[i]);
  return out;
}

}  // namespace sememe::data
