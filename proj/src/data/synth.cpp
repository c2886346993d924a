#include "sememe/data/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <set>

#include <fmt/format.h>

#include "json.hpp"
#include "sememe/common/error.hpp"
#include "sememe/data/split.hpp"

namespace sememe::data {

namespace {

constexpr std::string_view kAlphabet = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ";
constexpr char kSeparator = ' ';

std::string key_or_bare(const KeyValueConfig& c, const std::string& field) {
  if (c.contains("synth." + field)) return "synth." + field;
  return field;
}

std::vector<double> default_fractions(std::size_t resources) {
  if (resources == 1) return {1.0};
  if (resources == 2) return {0.6, 0.6};
  return std::vector<double>(resources, std::min(1.0, 1.2 / static_cast<double>(resources)));
}

// Label index windows revealed by each resource.
std::vector<std::vector<std::size_t>> reveal_windows(const SynthConfig& cfg) {
  const std::size_t L = cfg.num_labels;
  const std::size_t R = cfg.resource_count;
  std::vector<std::vector<std::size_t>> out(R);
  for (std::size_t r = 0; r < R; ++r) {
    const auto width = static_cast<std::size_t>(std::ceil(cfg.resource_fractions[r] * static_cast<double>(L) - 1e-9));
    const std::size_t w = std::clamp<std::size_t>(width, 1, L);
    std::size_t start = 0;
    if (R > 1) {
      start = static_cast<std::size_t>(std::llround(static_cast<double>(r) * static_cast<double>(L - w) /
                                                    static_cast<double>(R - 1)));
    }
    for (std::size_t l = start; l < start + w; ++l) out[r].push_back(l);
  }
  return out;
}

}  // namespace

SynthConfig SynthConfig::from_config(const KeyValueConfig& c) {
  SynthConfig cfg;
  auto u = [&](const char* field, std::size_t fallback) {
    return static_cast<std::size_t>(c.get_uint(key_or_bare(c, field), fallback));
  };
  cfg.num_labels = u("num_labels", cfg.num_labels);
  cfg.num_examples = u("num_examples", cfg.num_examples);
  cfg.resource_count = u("resource_count", cfg.resource_count);
  cfg.label_count_weights = c.get_doubles(key_or_bare(c, "label_count_weights"), cfg.label_count_weights);
  cfg.inventory_size = u("inventory_size", cfg.inventory_size);
  cfg.cue_min_length = u("cue_min_length", cfg.cue_min_length);
  cfg.cue_max_length = u("cue_max_length", cfg.cue_max_length);
  cfg.alphabet_size = u("alphabet_size", cfg.alphabet_size);
  cfg.noise_rate = c.get_double(key_or_bare(c, "noise_rate"), cfg.noise_rate);
  cfg.resource_fractions =
      c.get_doubles(key_or_bare(c, "resource_fractions"), default_fractions(cfg.resource_count));
  cfg.num_topics = u("num_topics", cfg.num_topics);
  cfg.topic_affinity = c.get_double(key_or_bare(c, "topic_affinity"), cfg.topic_affinity);
  cfg.seed = c.get_uint(key_or_bare(c, "seed"), cfg.seed);
  return cfg;
}

KeyValueConfig SynthConfig::to_config() const {
  auto join = [](const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + fmt::format("{}", v[i]);
    return out;
  };
  KeyValueConfig c;
  c.set("synth.num_labels", std::to_string(num_labels));
  c.set("synth.num_examples", std::to_string(num_examples));
  c.set("synth.resource_count", std::to_string(resource_count));
  c.set("synth.label_count_weights", join(label_count_weights));
  c.set("synth.inventory_size", std::to_string(inventory_size));
  c.set("synth.cue_min_length", std::to_string(cue_min_length));
  c.set("synth.cue_max_length", std::to_string(cue_max_length));
  c.set("synth.alphabet_size", std::to_string(alphabet_size));
  c.set("synth.noise_rate", fmt::format("{}", noise_rate));
  c.set("synth.resource_fractions", join(resource_fractions));
  c.set("synth.num_topics", std::to_string(num_topics));
  c.set("synth.topic_affinity", fmt::format("{}", topic_affinity));
  c.set("synth.seed", std::to_string(seed));
  return c;
}

void SynthConfig::validate() const {
  if (num_labels < 2) throw UsageError(fmt::format("synth: num_labels must be >= 2, got {}", num_labels));
  if (num_examples < kMinSplitSize) {
    throw UsageError(fmt::format("synth: num_examples must be >= {}, got {}", kMinSplitSize, num_examples));
  }
  if (resource_count < 1) throw UsageError("synth: resource_count must be >= 1");
  if (label_count_weights.empty() || label_count_weights.size() > kDefaultMaxLabels) {
    throw UsageError(fmt::format("synth: label_count_weights needs 1..{} entries", kDefaultMaxLabels));
  }
  if (std::any_of(label_count_weights.begin(), label_count_weights.end(), [](double w) { return w < 0; }) ||
      std::accumulate(label_count_weights.begin(), label_count_weights.end(), 0.0) <= 0) {
    throw UsageError("synth: label_count_weights must be nonnegative with a positive sum");
  }
  if (inventory_size < 1) throw UsageError("synth: inventory_size must be >= 1");
  if (cue_min_length < 1 || cue_max_length < cue_min_length) throw UsageError("synth: invalid cue word lengths");
  if (alphabet_size < 2 || alphabet_size > kAlphabet.size()) {
    throw UsageError(fmt::format("synth: alphabet_size must be in [2, {}]", kAlphabet.size()));
  }
  if (!(noise_rate >= 0.0 && noise_rate < 1.0)) throw UsageError("synth: noise_rate must be in [0, 1)");
  if (resource_fractions.size() != resource_count) {
    throw UsageError(fmt::format("synth: {} resource fractions for {} resources", resource_fractions.size(),
                                 resource_count));
  }
  for (double f : resource_fractions) {
    if (!(f > 0.0 && f <= 1.0)) throw UsageError("synth: resource fractions must be in (0, 1]");
  }
  if (num_topics < 1 || num_topics > num_labels) throw UsageError("synth: num_topics must be in [1, num_labels]");
  if (!(topic_affinity >= 0.0 && topic_affinity <= 1.0)) throw UsageError("synth: topic_affinity must be in [0, 1]");

  std::vector<bool> covered(num_labels, false);
  for (const auto& window : reveal_windows(*this)) {
    for (auto l : window) covered[l] = true;
  }
  if (std::find(covered.begin(), covered.end(), false) != covered.end()) {
    throw UsageError("synth: resource fractions do not jointly cover every label");
  }
  double capacity = 1.0;
  for (std::size_t len = cue_min_length; len <= cue_max_length; ++len) {
    capacity += std::pow(static_cast<double>(alphabet_size), static_cast<double>(len));
  }
  if (capacity < 2.0 * static_cast<double>(num_labels * inventory_size)) {
    throw UsageError("synth: alphabet too small for the requested number of distinct cue words");
  }
}

SynthCorpus generate_synthetic(const SynthConfig& cfg) {
  cfg.validate();
  std::mt19937_64 rng(cfg.seed);
  const std::size_t L = cfg.num_labels;
  const std::string_view alphabet = kAlphabet.substr(0, cfg.alphabet_size);

  SynthCorpus out;
  Lexicon& lex = out.lexicon;
  const auto width = std::to_string(L - 1).size();
  for (std::size_t l = 0; l < L; ++l) lex.labels.push_back(fmt::format("s{:0{}}", l, width));

  // Distinct cue words across all labels.
  std::set<std::string> used;
  std::uniform_int_distribution<std::size_t> len_dist(cfg.cue_min_length, cfg.cue_max_length);
  std::uniform_int_distribution<std::size_t> char_dist(0, alphabet.size() - 1);
  lex.cue_words.resize(L);
  for (std::size_t l = 0; l < L; ++l) {
    while (lex.cue_words[l].size() < cfg.inventory_size) {
      std::string w;
      const std::size_t len = len_dist(rng);
      for (std::size_t i = 0; i < len; ++i) w.push_back(alphabet[char_dist(rng)]);
      if (used.insert(w).second) lex.cue_words[l].push_back(w);
    }
  }

  lex.revealed = reveal_windows(cfg);

  std::vector<std::size_t> canonical(L);
  std::iota(canonical.begin(), canonical.end(), 0);
  std::shuffle(canonical.begin(), canonical.end(), rng);
  lex.canonical_rank.assign(L, 0);
  for (std::size_t pos = 0; pos < L; ++pos) lex.canonical_rank[canonical[pos]] = pos;

  std::vector<std::size_t> topic_of(L);
  {
    std::vector<std::size_t> perm(L);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    for (std::size_t i = 0; i < L; ++i) topic_of[perm[i]] = i * cfg.num_topics / L;
  }

  // Label sets.
  std::discrete_distribution<std::size_t> size_dist(cfg.label_count_weights.begin(), cfg.label_count_weights.end());
  std::uniform_int_distribution<std::size_t> topic_dist(0, cfg.num_topics - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t max_size = std::min(cfg.label_count_weights.size(), L);
  std::vector<std::vector<std::size_t>> sets(cfg.num_examples);
  for (auto& set : sets) {
    const std::size_t k = std::min(size_dist(rng) + 1, max_size);
    const std::size_t topic = topic_dist(rng);
    while (set.size() < k) {
      std::vector<std::size_t> pool;
      const bool on_topic = unit(rng) < cfg.topic_affinity;
      for (std::size_t l = 0; l < L; ++l) {
        if (std::find(set.begin(), set.end(), l) != set.end()) continue;
        if (on_topic && topic_of[l] != topic) continue;
        pool.push_back(l);
      }
      if (pool.empty()) {
        for (std::size_t l = 0; l < L; ++l) {
          if (std::find(set.begin(), set.end(), l) == set.end()) pool.push_back(l);
        }
      }
      std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
      set.push_back(pool[pick(rng)]);
    }
  }

  // Every label must occur in the training split.
  const auto split = split_indices(cfg.num_examples, cfg.seed);
  std::vector<bool> in_train(L, false);
  for (auto i : split.train)
    for (auto l : sets[i]) in_train[l] = true;
  for (std::size_t l = 0; l < L; ++l) {
    if (in_train[l]) continue;
    for (auto i : split.train) {
      if (sets[i].size() < max_size) {
        sets[i].push_back(l);
        in_train[l] = true;
        break;
      }
    }
  }

  std::vector<std::vector<bool>> reveals(cfg.resource_count, std::vector<bool>(L, false));
  for (std::size_t r = 0; r < cfg.resource_count; ++r)
    for (auto l : lex.revealed[r]) reveals[r][l] = true;

  std::uniform_int_distribution<std::size_t> cue_pick(0, cfg.inventory_size - 1);
  const auto ex_width = std::to_string(cfg.num_examples - 1).size();
  for (std::size_t i = 0; i < cfg.num_examples; ++i) {
    auto& set = sets[i];
    std::sort(set.begin(), set.end(),
              [&](std::size_t a, std::size_t b) { return lex.canonical_rank[a] < lex.canonical_rank[b]; });
    Record rec;
    rec.word = fmt::format("w{:0{}}", i, ex_width);
    for (auto l : set) rec.labels.push_back(lex.labels[l]);
    for (std::size_t r = 0; r < cfg.resource_count; ++r) {
      std::vector<std::size_t> shown;
      for (auto l : set)
        if (reveals[r][l]) shown.push_back(l);
      std::shuffle(shown.begin(), shown.end(), rng);
      // Each emitted token is a noise word with probability noise_rate.
      std::string text;
      std::size_t next = 0;
      while (true) {
        std::string token;
        if (unit(rng) < cfg.noise_rate) {
          do {
            token.clear();
            const std::size_t len = len_dist(rng);
            for (std::size_t c = 0; c < len; ++c) token.push_back(alphabet[char_dist(rng)]);
          } while (used.count(token) != 0);
        } else if (next < shown.size()) {
          token = lex.cue_words[shown[next++]][cue_pick(rng)];
        } else {
          break;
        }
        if (!text.empty()) text.push_back(kSeparator);
        text += token;
      }
      rec.descriptions.push_back(std::move(text));
    }
    out.records.push_back(std::move(rec));
  }
  return out;
}

void write_lexicon(const std::filesystem::path& path, const Lexicon& lexicon) {
  nlohmann::ordered_json obj;
  obj["labels"] = lexicon.labels;
  obj["cue_words"] = lexicon.cue_words;
  obj["revealed"] = lexicon.revealed;
  obj["canonical_rank"] = lexicon.canonical_rank;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError(fmt::format("cannot write lexicon '{}'", path.string()));
  out << obj.dump(1) << "\n";
}

Lexicon read_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError(fmt::format("cannot open lexicon '{}'", path.string()));
  try {
    const auto obj = nlohmann::json::parse(in);
    Lexicon lex;
    lex.labels = obj.at("labels").get<std::vector<std::string>>();
    lex.cue_words = obj.at("cue_words").get<std::vector<std::vector<std::string>>>();
    lex.revealed = obj.at("revealed").get<std::vector<std::vector<std::size_t>>>();
    lex.canonical_rank = obj.at("canonical_rank").get<std::vector<std::size_t>>();
    return lex;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(fmt::format("malformed lexicon '{}': {}", path.string(), e.what()));
  }
}

SpanOracle::SpanOracle(Lexicon lexicon) : lexicon_(std::move(lexicon)) {
  for (std::size_t l = 0; l < lexicon_.cue_words.size(); ++l) {
    for (const auto& w : lexicon_.cue_words[l]) word_to_label_.emplace(w, l);
  }
}

std::vector<std::string> SpanOracle::decode(const Record& record, std::span<const std::size_t> resources) const {
  std::vector<std::size_t> which(resources.begin(), resources.end());
  if (which.empty()) {
    which.resize(record.descriptions.size());
    std::iota(which.begin(), which.end(), 0);
  }
  std::set<std::size_t> found;
  for (auto r : which) {
    if (r >= record.descriptions.size()) continue;
    for (const auto& token : split(record.descriptions[r], kSeparator)) {
      if (auto it = word_to_label_.find(token); it != word_to_label_.end()) found.insert(it->second);
    }
  }
  std::vector<std::size_t> ordered(found.begin(), found.end());
  std::sort(ordered.begin(), ordered.end(), [&](std::size_t a, std::size_t b) {
    return lexicon_.canonical_rank[a] < lexicon_.canonical_rank[b];
  });
  std::vector<std::string> out;
  for (auto l : ordered) out.push_back(lexicon_.labels[l]);
  return out;
}

}  // namespace sememe::data
