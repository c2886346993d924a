#include "sememe/baselines/mlknn.hpp"

#include <algorithm>
#include <numeric>

#include <fmt/format.h>

#include "sememe/common/error.hpp"

namespace sememe::baselines {

Mlknn Mlknn::fit(std::vector<SparseVector> features, std::vector<std::vector<int>> labels, std::size_t num_labels,
                 const MlknnConfig& config) {
  if (features.empty()) throw UsageError("ML-KNN needs a nonempty training set");
  if (features.size() != labels.size()) throw UsageError("ML-KNN: features and labels differ in length");
  if (config.k < 1 || config.k > features.size()) {
    throw UsageError(fmt::format("ML-KNN: k must be in [1, {}], got {}", features.size(), config.k));
  }
  if (!(config.smooth > 0)) throw UsageError("ML-KNN: smooth must be positive");

  Mlknn m;
  m.config_ = config;
  m.num_labels_ = num_labels;
  m.features_ = std::move(features);
  const std::size_t n = m.features_.size();
  const std::size_t k = config.k;
  const double s = config.smooth;
  m.has_.assign(n, std::vector<bool>(num_labels, false));
  for (std::size_t i = 0; i < n; ++i) {
    for (int l : labels[i]) {
      if (l < 0 || static_cast<std::size_t>(l) >= num_labels) {
        throw UsageError(fmt::format("ML-KNN: label {} out of range", l));
      }
      m.has_[i][static_cast<std::size_t>(l)] = true;
    }
  }

  m.prior_.assign(num_labels, 0.0);
  std::vector<std::vector<double>> with(num_labels, std::vector<double>(k + 1, 0.0));
  std::vector<std::vector<double>> without(num_labels, std::vector<double>(k + 1, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    const auto nb = m.neighbors(m.features_[i], std::min(k, n - 1), i);
    for (std::size_t l = 0; l < num_labels; ++l) {
      std::size_t j = 0;
      for (auto q : nb) j += m.has_[q][l] ? 1 : 0;
      (m.has_[i][l] ? with : without)[l][j] += 1.0;
    }
  }
  m.count_with_ = with;
  m.count_without_ = without;
  m.like_with_ = with;
  m.like_without_ = without;
  m.positives_.assign(num_labels, 0.0);
  for (std::size_t l = 0; l < num_labels; ++l) {
    const double pos = std::accumulate(with[l].begin(), with[l].end(), 0.0);
    const double neg = std::accumulate(without[l].begin(), without[l].end(), 0.0);
    m.positives_[l] = pos;
    m.prior_[l] = (s + pos) / (2 * s + static_cast<double>(n));
    for (std::size_t j = 0; j <= k; ++j) {
      m.like_with_[l][j] = (s + with[l][j]) / (s * static_cast<double>(k + 1) + pos);
      m.like_without_[l][j] = (s + without[l][j]) / (s * static_cast<double>(k + 1) + neg);
    }
  }
  return m;
}

std::vector<std::size_t> Mlknn::neighbors(const SparseVector& query, std::size_t count, std::size_t exclude) const {
  std::vector<std::pair<double, std::size_t>> scored;
  scored.reserve(features_.size());
  for (std::size_t i = 0; i < features_.size(); ++i) {
    if (i != exclude) scored.emplace_back(cosine_similarity(query, features_[i]), i);
  }
  count = std::min(count, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(count), scored.end(),
                    [](const auto& a, const auto& b) { return a.first != b.first ? a.first > b.first : a.second < b.second; });
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(scored[i].second);
  return out;
}

double Mlknn::likelihood(std::size_t label, std::size_t j, bool has_label) const {
  return has_label ? like_with_[label][j] : like_without_[label][j];
}

std::vector<int> Mlknn::predict(const SparseVector& query) const {
  const auto nb = neighbors(query, config_.k);
  const double s = config_.smooth;
  const double n = static_cast<double>(features_.size());
  const double slots = s * static_cast<double>(config_.k + 1);
  std::vector<int> out;
  for (std::size_t l = 0; l < num_labels_; ++l) {
    std::size_t j = 0;
    for (auto q : nb) j += has_[q][l] ? 1 : 0;
    // prior * likelihood for both hypotheses with the shared denominators
    // multiplied out, so small-count ties compare exactly.
    const double pos = positives_[l];
    const double neg = n - pos;
    const double yes = (s + pos) * (s + count_with_[l][j]) * (slots + neg);
    const double no = (s + neg) * (s + count_without_[l][j]) * (slots + pos);
    if (yes > no) out.push_back(static_cast<int>(l));
  }
  return out;
}

}  // namespace sememe::baselines
