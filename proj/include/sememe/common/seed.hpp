#pragma once

#include <cstdint>
#include <string_view>

#include "sememe/common/kv_config.hpp"

namespace sememe {

// Independent, reproducible sub-seed for a named consumer of randomness.
inline std::uint64_t derive_seed(std::uint64_t root, std::string_view stream) {
  std::uint64_t z = root ^ fnv1a64(std::string(stream));
  // splitmix64 finalizer
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace sememe
