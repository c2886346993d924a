#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "sememe/data/vocab.hpp"

namespace sememe::data {

inline constexpr std::size_t kDefaultMaxLabels = 8;
inline constexpr std::size_t kMaxDescriptionTokens = 256;

// One corpus line in surface form:
// {"word": "...", "descriptions": ["...", ...], "labels": ["...", ...]}
struct Record {
  std::string word;
  std::vector<std::string> descriptions;
  std::vector<std::string> labels;

  bool operator==(const Record&) const = default;
};

// A record mapped to ids. descriptions[r] is empty when resource r is absent.
// labels keep the gold order and exclude EOS.
struct Example {
  std::string word;
  std::vector<std::vector<int>> descriptions;
  std::vector<int> labels;
};

struct Vocabs {
  Vocab chars;
  Vocab labels;
};

struct LoadOptions {
  std::size_t max_labels = kDefaultMaxLabels;
  std::size_t max_description_tokens = kMaxDescriptionTokens;
};

// Parses and validates line-delimited records. Errors name the source and
// the 1-based line number.
std::vector<Record> parse_records(std::istream& in, const std::string& source, const LoadOptions& options = {});
std::vector<Record> read_records(const std::filesystem::path& path, const LoadOptions& options = {});

std::string record_to_json(const Record& record);
void write_records(const std::filesystem::path& path, std::span<const Record> records);

// Character vocab (per Unicode scalar) and label vocab from training records.
// Tokens are added in sorted order so the ids do not depend on record order.
Vocabs build_vocabs(std::span<const Record> train);

Example encode(const Record& record, const Vocabs& vocabs, const LoadOptions& options = {});
std::vector<Example> encode_all(std::span<const Record> records, const Vocabs& vocabs,
                                const LoadOptions& options = {});

struct Corpus {
  std::vector<Example> examples;
  Vocabs vocabs;
};

// Loads a training file: vocabs are built from this file only.
Corpus load_corpus(const std::filesystem::path& path, const LoadOptions& options = {});
// Loads a dev/test file against existing vocabs; unseen tokens map to UNK.
std::vector<Example> load_examples(const std::filesystem::path& path, const Vocabs& vocabs,
                                   const LoadOptions& options = {});

std::size_t resource_count(std::span<const Example> examples);

// Keeps only the listed resources (0-based) of each example, in that order.
std::vector<Example> select_resources(std::span<const Example> examples, std::span<const std::size_t> resources);

}  // namespace sememe::data
