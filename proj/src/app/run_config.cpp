#include "sememe/app/run_config.hpp"

#include <algorithm>
#include <cstdlib>

#include <fmt/format.h>

#include "sememe/common/error.hpp"

namespace sememe::app {

RunConfig RunConfig::load(const std::optional<std::filesystem::path>& file, const std::vector<std::string>& overrides,
                          const std::optional<std::string>& env_seed) {
  RunConfig rc;
  if (file) rc.values_ = KeyValueConfig::from_file(*file);
  for (const auto& o : overrides) rc.values_.set_assignment(o);
  if (env_seed) {
    KeyValueConfig probe;
    probe.set("seed", *env_seed);
    (void)probe.get_uint("seed", 0);  // validates the value
    rc.values_.set("seed", *env_seed);
  }
  return rc;
}

model::HyperParams RunConfig::hyper() const {
  auto base = model::HyperParams::preset(preset());
  base.seed = seed();
  auto hp = model::HyperParams::from_config(values_, base);
  hp.validate();
  return hp;
}

data::SynthConfig RunConfig::synth() const {
  KeyValueConfig c = values_;
  if (!c.contains("synth.seed") && !c.contains("seed")) c.set("synth.seed", std::to_string(seed()));
  auto cfg = data::SynthConfig::from_config(c);
  cfg.validate();
  return cfg;
}

baselines::BaselineConfig RunConfig::baseline() const { return baselines::BaselineConfig::from_config(values_); }

std::string RunConfig::hash() const { return hex64(fnv1a64(values_.canonical())); }

std::optional<std::string> read_env(const char* name) {
  const char* v = std::getenv(name);
  if (v == nullptr || *v == '\0') return std::nullopt;
  return std::string(v);
}

std::vector<std::size_t> parse_resource_list(const std::string& text) {
  std::vector<std::size_t> out;
  for (const auto& part : split(text, ',')) {
    const auto t = trim(part);
    std::size_t pos = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(t, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (t.empty() || pos != t.size() || v == 0) {
      throw UsageError(fmt::format("malformed resource list '{}' (expected 1-based indices like 1,2)", text));
    }
    if (std::find(out.begin(), out.end(), v - 1) != out.end()) {
      throw UsageError(fmt::format("resource {} listed twice in '{}'", v, text));
    }
    out.push_back(v - 1);
  }
  return out;
}

std::string format_resource_list(const std::vector<std::size_t>& resources) {
  std::string out;
  for (std::size_t i = 0; i < resources.size(); ++i) out += (i ? "," : "") + std::to_string(resources[i] + 1);
  return out;
}

}  // namespace sememe::app
