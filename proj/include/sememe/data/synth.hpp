#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "sememe/common/kv_config.hpp"
#include "sememe/data/corpus.hpp"

namespace sememe::data {

/// Parameters of the synthetic labelled-description generator.
///
/// Every label owns `inventory_size` cue words over a small alphabet. A
/// description for resource r is the space-separated cue words (one per
/// label, in random order) of the example's labels that r reveals. Each
/// emitted token is instead a random non-cue word with probability
/// `noise_rate`, so even a description with nothing to reveal may hold
/// noise. Resource r reveals a contiguous window of
/// `resource_fractions[r]` of the label ids; the windows must jointly cover
/// every label. Label sets are drawn around a random topic (labels grouped
/// into `num_topics` blocks) with probability `topic_affinity` per draw, and
/// the gold order is one fixed random permutation of all labels.
struct SynthConfig {
  std::size_t num_labels = 50;
  std::size_t num_examples = 2500;
  std::size_t resource_count = 2;
  // Relative weights of label-set sizes 1, 2, ..., up to 8 entries.
  std::vector<double> label_count_weights = {0.15, 0.25, 0.25, 0.15, 0.10, 0.05, 0.03, 0.02};
  std::size_t inventory_size = 3;
  std::size_t cue_min_length = 3;
  std::size_t cue_max_length = 4;
  std::size_t alphabet_size = 16;
  double noise_rate = 0.2;
  std::vector<double> resource_fractions = {0.6, 0.6};
  std::size_t num_topics = 10;
  double topic_affinity = 0.7;
  std::uint64_t seed = 7;

  // Reads `synth.<field>` or bare `<field>` keys; unspecified fields keep
  // their defaults. resource_fractions defaults follow resource_count.
  static SynthConfig from_config(const KeyValueConfig& config);
  KeyValueConfig to_config() const;
  void validate() const;
};

// Ground truth of a generated corpus, enough to decode descriptions exactly.
struct Lexicon {
  std::vector<std::string> labels;                       // by label index
  std::vector<std::vector<std::string>> cue_words;       // by label index
  std::vector<std::vector<std::size_t>> revealed;        // by resource: label indices
  std::vector<std::size_t> canonical_rank;               // by label index
};

struct SynthCorpus {
  std::vector<Record> records;
  Lexicon lexicon;
};

// Deterministic under config.seed. Every label occurs in the training part
// of split_indices(num_examples, config.seed).
SynthCorpus generate_synthetic(const SynthConfig& config);

void write_lexicon(const std::filesystem::path& path, const Lexicon& lexicon);
Lexicon read_lexicon(const std::filesystem::path& path);

/// Reads cue words back out of descriptions: splits on spaces, maps each
/// known cue word to its label, and returns the labels in gold order.
class SpanOracle {
 public:
  explicit SpanOracle(Lexicon lexicon);

  // `resources` lists 0-based description indices to read; empty = all.
  std::vector<std::string> decode(const Record& record, std::span<const std::size_t> resources = {}) const;

 private:
  Lexicon lexicon_;
  std::map<std::string, std::size_t> word_to_label_;
};

}  // namespace sememe::data
