#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "sememe/nd/params.hpp"

namespace sememe::nd {

// Free-form metadata stored alongside the parameters. Values must not
// contain newlines.
using Metadata = std::vector<std::pair<std::string, std::string>>;

struct Checkpoint {
  ParamSet params;
  Metadata meta;

  // Value for a metadata key, or `fallback` when absent.
  std::string meta_value(const std::string& key, const std::string& fallback = {}) const;
};

/// Writes `<path>` (text manifest) and `<path>.bin` (raw little-endian f64
/// blob).
///
/// Manifest layout, one `key=value` record per line:
///
///     format=sememe-checkpoint
///     version=1
///     dtype=f64
///     blob=<file name of the blob>
///     meta.<key>=<value>
///     param=<name> shape=<d0>,<d1> dtype=f64 offset=<bytes> bytes=<bytes>
///
/// Loading reproduces every parameter bit-exactly.
void save_checkpoint(const std::filesystem::path& path, const ParamSet& params, const Metadata& meta = {});
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace sememe::nd
