#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sememe/baselines/suite.hpp"
#include "sememe/common/kv_config.hpp"
#include "sememe/data/synth.hpp"
#include "sememe/model/hyper.hpp"

namespace sememe::app {

// Environment variable that overrides the root seed.
inline constexpr const char* kSeedEnv = "SEMEME_SEED";

/// Layered settings of one invocation: config file, then `key=value`
/// overrides, then the seed from the environment. The root seed is stored
/// under `seed` and feeds `synth.seed` and `train.seed` unless those are set
/// explicitly.
class RunConfig {
 public:
  static RunConfig load(const std::optional<std::filesystem::path>& file, const std::vector<std::string>& overrides,
                        const std::optional<std::string>& env_seed);

  const KeyValueConfig& values() const noexcept { return values_; }
  KeyValueConfig& values() noexcept { return values_; }

  std::string preset() const { return values_.get_string("preset", "desk"); }
  std::uint64_t seed() const { return values_.get_uint("seed", 7); }

  model::HyperParams hyper() const;
  data::SynthConfig synth() const;
  baselines::BaselineConfig baseline() const;

  // FNV-1a of the canonical key=value rendering.
  std::string hash() const;

 private:
  KeyValueConfig values_;
};

std::optional<std::string> read_env(const char* name);

// "1,2" -> {0, 1}. Throws UsageError on malformed or duplicate entries.
std::vector<std::size_t> parse_resource_list(const std::string& text);
std::string format_resource_list(const std::vector<std::size_t>& resources);

}  // namespace sememe::app
