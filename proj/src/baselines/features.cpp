#include "sememe/baselines/features.hpp"

#include <algorithm>
#include <cmath>

namespace sememe::baselines {

namespace {

template <typename Fn>
void for_each_ngram(const data::Example& ex, Fn fn) {
  for (const auto& d : ex.descriptions) {
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (d[i] == data::Vocab::kUnk) continue;
      fn(std::pair<int, int>{d[i], -1});
      if (i + 1 < d.size() && d[i + 1] != data::Vocab::kUnk) fn(std::pair<int, int>{d[i], d[i + 1]});
    }
  }
}

}  // namespace

FeatureSpace FeatureSpace::fit(std::span<const data::Example> train) {
  FeatureSpace fs;
  for (const auto& ex : train) for_each_ngram(ex, [&](const auto& g) { fs.index_.emplace(g, 0); });
  std::size_t next = 0;
  for (auto& [gram, id] : fs.index_) id = next++;
  return fs;
}

SparseVector FeatureSpace::extract(const data::Example& ex) const {
  std::map<std::size_t, double> counts;
  for_each_ngram(ex, [&](const auto& g) {
    if (auto it = index_.find(g); it != index_.end()) counts[it->second] += 1.0;
  });
  return {counts.begin(), counts.end()};
}

std::vector<SparseVector> FeatureSpace::extract_all(std::span<const data::Example> examples) const {
  std::vector<SparseVector> out;
  out.reserve(examples.size());
  for (const auto& ex : examples) out.push_back(extract(ex));
  return out;
}

double cosine_similarity(const SparseVector& a, const SparseVector& b) {
  double dot = 0, na = 0, nb = 0;
  for (const auto& [i, v] : a) na += v * v;
  for (const auto& [i, v] : b) nb += v * v;
  if (na == 0 || nb == 0) return 0.0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      dot += ia->second * ib->second;
      ++ia;
      ++ib;
    }
  }
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

std::vector<int> label_ids(const data::Example& ex) {
  std::vector<int> out;
  for (int id : ex.labels) {
    if (id >= data::Vocab::kReserved) out.push_back(id);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace sememe::baselines
