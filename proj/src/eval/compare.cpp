#include "sememe/eval/compare.hpp"

#include <algorithm>
#include <array>
#include <fstream>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "json.hpp"
#include "sememe/common/error.hpp"

namespace sememe::eval {

namespace {

constexpr std::array<std::string_view, 8> kModelOrder = {"mlknn",         "lp",         "br",     "cc", "rnn-mllr",
                                                         "basic-seq2seq", "ld-seq2seq", "oracle"};

std::size_t rank_of(const ReportRow& row) {
  if (row.section == Section::kResources) return row.model.rfind("MultiRes", 0) == 0 ? 1 : 0;
  const auto it = std::find(kModelOrder.begin(), kModelOrder.end(), row.model);
  return static_cast<std::size_t>(it - kModelOrder.begin());
}

std::string fixed4(double v) { return fmt::format("{:.4f}", v); }

}  // namespace

std::string section_name(Section section) { return section == Section::kModels ? "models" : "resources"; }

ComparisonReport compare(std::span<const ModelEntry> models, std::span<const LabelSet> golds,
                         const ReportContext& context) {
  ComparisonReport report;
  report.context = context;
  for (const auto& m : models) {
    ReportRow row;
    row.model = m.name;
    row.section = m.section;
    try {
      const auto predictions = m.run();
      row.metrics = micro_prf(predictions, golds);
    } catch (const std::exception& e) {
      row.error = e.what();
      spdlog::error("model '{}' failed: {}", m.name, e.what());
    }
    report.rows.push_back(std::move(row));
  }
  std::stable_sort(report.rows.begin(), report.rows.end(), [](const ReportRow& a, const ReportRow& b) {
    if (a.section != b.section) return a.section < b.section;
    return rank_of(a) < rank_of(b);
  });
  return report;
}

std::string format_table(const ComparisonReport& report) {
  std::size_t width = 5;
  for (const auto& r : report.rows) width = std::max(width, r.model.size());
  std::string out;
  for (Section section : {Section::kModels, Section::kResources}) {
    bool header = false;
    for (const auto& r : report.rows) {
      if (r.section != section) continue;
      if (!header) {
        if (!out.empty()) out += "\n";
        out += fmt::format("[{}] split={} seed={}\n", section_name(section), report.context.split,
                           report.context.seed);
        out += fmt::format("{:<{}}  {:>7}  {:>7}  {:>7}  {:>8}\n", "model", width, "P", "R", "F1", "accuracy");
        header = true;
      }
      if (r.metrics) {
        out += fmt::format("{:<{}}  {:>7}  {:>7}  {:>7}  {:>8}\n", r.model, width, fixed4(r.metrics->precision),
                           fixed4(r.metrics->recall), fixed4(r.metrics->f1), fixed4(r.metrics->accuracy));
      } else {
        out += fmt::format("{:<{}}  failed: {}\n", r.model, width, r.error);
      }
    }
  }
  return out;
}

std::string format_jsonl(const ComparisonReport& report) {
  std::string out;
  for (const auto& r : report.rows) {
    // Numbers are spliced in as text so that every line is byte-stable.
    nlohmann::ordered_json head;
    head["model"] = r.model;
    head["section"] = section_name(r.section);
    head["split"] = report.context.split;
    std::string line = head.dump();
    line.pop_back();
    if (r.metrics) {
      const auto& m = *r.metrics;
      line += fmt::format(",\"status\":\"ok\",\"P\":{},\"R\":{},\"F1\":{},\"accuracy\":{},\"TP\":{},\"FP\":{},\"FN\":{}",
                          fixed4(m.precision), fixed4(m.recall), fixed4(m.f1), fixed4(m.accuracy), m.true_positives,
                          m.false_positives, m.false_negatives);
    } else {
      line += ",\"status\":\"failed\",\"P\":null,\"R\":null,\"F1\":null,\"accuracy\":null,\"error\":" +
              nlohmann::json(r.error).dump();
    }
    line += fmt::format(",\"seed\":{},\"config_hash\":{}}}\n", report.context.seed,
                        nlohmann::json(report.context.config_hash).dump());
    out += line;
  }
  return out;
}

void write_report(const std::filesystem::path& path, const ComparisonReport& report) {
  auto write = [](const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out || !(out << text) || !out.flush()) throw DataError(fmt::format("cannot write report '{}'", p.string()));
  };
  write(path, format_jsonl(report));
  auto table = path;
  table += ".txt";
  write(table, format_table(report));
}

}  // namespace sememe::eval
