#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sememe/eval/metrics.hpp"

namespace sememe::eval {

enum class Section { kModels, kResources };

// A named model that produces one label set per test example, in order.
struct ModelEntry {
  std::string name;
  Section section = Section::kModels;
  std::function<std::vector<LabelSet>()> run;
};

struct ReportRow {
  std::string model;
  Section section = Section::kModels;
  std::optional<MetricReport> metrics;  // empty when the model failed
  std::string error;
};

struct ReportContext {
  std::string split = "test";
  std::uint64_t seed = 0;
  std::string config_hash;
};

struct ComparisonReport {
  ReportContext context;
  std::vector<ReportRow> rows;
};

/// Runs every model against the same golds.
///
/// Model rows follow the order mlknn, lp, br, cc, rnn-mllr, basic-seq2seq,
/// ld-seq2seq, oracle (other names after, in input order); resource rows
/// list SingleRes-* before MultiRes. A model that throws or returns the
/// wrong number of predictions is kept as a failed row.
ComparisonReport compare(std::span<const ModelEntry> models, std::span<const LabelSet> golds,
                         const ReportContext& context);

// Aligned plain-text table with a header per section.
std::string format_table(const ComparisonReport& report);
// One JSON object per row and line; numbers carry 4 decimals.
std::string format_jsonl(const ComparisonReport& report);

// Writes the JSONL report to `path` and the table next to it as `<path>.txt`.
void write_report(const std::filesystem::path& path, const ComparisonReport& report);

std::string section_name(Section section);

}  // namespace sememe::eval
