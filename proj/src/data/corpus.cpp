#include "sememe/data/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "json.hpp"
#include "sememe/common/error.hpp"
#include "sememe/data/utf8.hpp"

namespace sememe::data {

using json = nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& source, int line, const std::string& what) {
  throw DataError(fmt::format("{}:{}: {}", source, line, what));
}

std::vector<std::string> string_array(const json& obj, const char* field, const std::string& source, int line) {
  if (!obj.contains(field)) fail(source, line, fmt::format("missing field '{}'", field));
  const auto& arr = obj.at(field);
  if (!arr.is_array()) fail(source, line, fmt::format("field '{}' must be an array of strings", field));
  std::vector<std::string> out;
  for (const auto& v : arr) {
    if (!v.is_string()) fail(source, line, fmt::format("field '{}' must be an array of strings", field));
    out.push_back(v.get<std::string>());
  }
  return out;
}

}  // namespace

std::vector<Record> parse_records(std::istream& in, const std::string& source, const LoadOptions& options) {
  std::vector<Record> records;
  std::string line;
  int line_no = 0;
  std::size_t resources = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      fail(source, line_no, fmt::format("malformed JSON ({})", e.what()));
    }
    if (!obj.is_object()) fail(source, line_no, "record must be a JSON object");
    Record rec;
    if (!obj.contains("word") || !obj.at("word").is_string()) fail(source, line_no, "missing string field 'word'");
    rec.word = obj.at("word").get<std::string>();
    rec.descriptions = string_array(obj, "descriptions", source, line_no);
    rec.labels = string_array(obj, "labels", source, line_no);

    if (rec.descriptions.empty()) fail(source, line_no, "record has no descriptions");
    if (resources == 0) resources = rec.descriptions.size();
    if (rec.descriptions.size() != resources) {
      fail(source, line_no,
           fmt::format("record has {} descriptions, earlier records have {}", rec.descriptions.size(), resources));
    }
    if (std::all_of(rec.descriptions.begin(), rec.descriptions.end(), [](const auto& d) { return d.empty(); })) {
      fail(source, line_no, "all descriptions are empty");
    }
    for (const auto& d : rec.descriptions) {
      try {
        (void)utf8_scalars(d);
      } catch (const DataError& e) {
        fail(source, line_no, e.what());
      }
    }
    if (rec.labels.empty()) fail(source, line_no, "record has no labels");
    if (rec.labels.size() > options.max_labels) {
      fail(source, line_no, fmt::format("record has {} labels, limit is {}", rec.labels.size(), options.max_labels));
    }
    std::set<std::string> seen;
    for (const auto& l : rec.labels) {
      if (l.empty()) fail(source, line_no, "empty label");
      if (!seen.insert(l).second) fail(source, line_no, fmt::format("duplicate label '{}'", l));
    }
    records.push_back(std::move(rec));
  }
  if (records.empty()) spdlog::warn("{}: corpus is empty", source);
  return records;
}

std::vector<Record> read_records(const std::filesystem::path& path, const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw DataError(fmt::format("cannot open corpus file '{}'", path.string()));
  return parse_records(in, path.string(), options);
}

std::string record_to_json(const Record& record) {
  json obj;
  obj["word"] = record.word;
  obj["descriptions"] = record.descriptions;
  obj["labels"] = record.labels;
  return obj.dump();
}

void write_records(const std::filesystem::path& path, std::span<const Record> records) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError(fmt::format("cannot write corpus file '{}'", path.string()));
  for (const auto& r : records) out << record_to_json(r) << "\n";
  if (!out.flush()) throw DataError(fmt::format("failed writing corpus file '{}'", path.string()));
}

Vocabs build_vocabs(std::span<const Record> train) {
  std::set<std::string> chars;
  std::set<std::string> labels;
  for (const auto& r : train) {
    for (const auto& d : r.descriptions) {
      for (auto& c : utf8_scalars(d)) chars.insert(std::move(c));
    }
    labels.insert(r.labels.begin(), r.labels.end());
  }
  Vocabs v;
  for (const auto& c : chars) v.chars.add(c);
  for (const auto& l : labels) v.labels.add(l);
  return v;
}

Example encode(const Record& record, const Vocabs& vocabs, const LoadOptions& options) {
  Example ex;
  ex.word = record.word;
  for (const auto& d : record.descriptions) {
    auto scalars = utf8_scalars(d);
    if (scalars.size() > options.max_description_tokens) {
      spdlog::debug("word '{}': description truncated from {} to {} tokens", record.word, scalars.size(),
                    options.max_description_tokens);
      scalars.resize(options.max_description_tokens);
    }
    std::vector<int> ids;
    ids.reserve(scalars.size());
    for (const auto& s : scalars) ids.push_back(vocabs.chars.id(s));
    ex.descriptions.push_back(std::move(ids));
  }
  for (const auto& l : record.labels) {
    const int id = vocabs.labels.id(l);
    if (id == Vocab::kUnk && std::find(ex.labels.begin(), ex.labels.end(), id) != ex.labels.end()) continue;
    ex.labels.push_back(id);
  }
  return ex;
}

std::vector<Example> encode_all(std::span<const Record> records, const Vocabs& vocabs, const LoadOptions& options) {
  std::vector<Example> out;
  out.reserve(records.size());
  std::size_t truncated = 0;
  for (const auto& r : records) {
    for (const auto& d : r.descriptions) {
      if (utf8_scalars(d).size() > options.max_description_tokens) ++truncated;
    }
    out.push_back(encode(r, vocabs, options));
  }
  if (truncated != 0) {
    spdlog::info("{} descriptions truncated to {} tokens", truncated, options.max_description_tokens);
  }
  return out;
}

Corpus load_corpus(const std::filesystem::path& path, const LoadOptions& options) {
  const auto records = read_records(path, options);
  Corpus corpus;
  corpus.vocabs = build_vocabs(records);
  corpus.examples = encode_all(records, corpus.vocabs, options);
  return corpus;
}

std::vector<Example> load_examples(const std::filesystem::path& path, const Vocabs& vocabs,
                                   const LoadOptions& options) {
  const auto records = read_records(path, options);
  return encode_all(records, vocabs, options);
}

std::size_t resource_count(std::span<const Example> examples) {
  return examples.empty() ? 0 : examples.front().descriptions.size();
}

std::vector<Example> select_resources(std::span<const Example> examples, std::span<const std::size_t> resources) {
  std::vector<Example> out;
  out.reserve(examples.size());
  for (const auto& ex : examples) {
    Example copy;
    copy.word = ex.word;
    copy.labels = ex.labels;
    for (auto r : resources) {
      if (r >= ex.descriptions.size()) {
        throw UsageError(fmt::format("resource {} requested but examples have {}", r + 1, ex.descriptions.size()));
      }
      copy.descriptions.push_back(ex.descriptions[r]);
    }
    out.push_back(std::move(copy));
  }
  return out;
}

}  // namespace sememe::data
