#include "sememe/data/sgns.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "sememe/common/error.hpp"
#include "sememe/nd/params.hpp"

namespace sememe::data {

namespace {

double sigmoid(double x) { return x >= 0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x)); }

}  // namespace

nd::Tensor pretrain_label_embeddings(std::span<const Example> train, std::size_t vocab_size,
                                     const SgnsConfig& config) {
  if (train.empty()) throw UsageError("label pretraining needs a nonempty training set");
  if (config.dim < 2) throw UsageError(fmt::format("label embedding dim must be >= 2, got {}", config.dim));
  if (vocab_size <= static_cast<std::size_t>(Vocab::kReserved)) throw UsageError("label vocab has no labels");

  nd::Rng rng(config.seed);
  nd::Tensor table = nd::uniform({vocab_size, config.dim}, nd::kInitBound, rng, false);
  const std::size_t dim = config.dim;

  std::vector<double> counts(vocab_size, 0.0);
  std::size_t pairs_per_epoch = 0;
  for (const auto& ex : train) {
    for (int id : ex.labels) {
      if (id < 0 || static_cast<std::size_t>(id) >= vocab_size) {
        throw DataError(fmt::format("label id {} outside vocab of size {}", id, vocab_size));
      }
      counts[static_cast<std::size_t>(id)] += 1.0;
    }
    pairs_per_epoch += ex.labels.size() * (ex.labels.size() - 1);
  }
  std::size_t unseen = 0;
  for (std::size_t l = Vocab::kReserved; l < vocab_size; ++l) {
    if (counts[l] == 0) ++unseen;
  }
  if (unseen != 0) spdlog::warn("{} labels never occur in training; their embeddings keep the random init", unseen);
  if (config.epochs == 0 || pairs_per_epoch == 0) return table;

  std::vector<double> noise(vocab_size);
  for (std::size_t l = 0; l < vocab_size; ++l) noise[l] = std::pow(counts[l], 0.75);
  std::discrete_distribution<std::size_t> negative(noise.begin(), noise.end());

  auto in = table.values_mut();
  std::vector<double> out(vocab_size * dim, 0.0);
  std::vector<double> step(dim);
  const double total = static_cast<double>(pairs_per_epoch * config.epochs);
  const double min_lr = config.learning_rate * 1e-4;
  std::size_t done = 0;

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    for (const auto& ex : train) {
      for (std::size_t i = 0; i < ex.labels.size(); ++i) {
        for (std::size_t j = 0; j < ex.labels.size(); ++j) {
          if (i == j) continue;
          const double lr =
              std::max(min_lr, config.learning_rate * (1.0 - static_cast<double>(done) / total));
          ++done;
          double* v = &in[static_cast<std::size_t>(ex.labels[i]) * dim];
          std::fill(step.begin(), step.end(), 0.0);
          for (std::size_t n = 0; n <= config.negatives; ++n) {
            std::size_t target = static_cast<std::size_t>(ex.labels[j]);
            double label = 1.0;
            if (n > 0) {
              target = negative(rng);
              if (target == static_cast<std::size_t>(ex.labels[j])) continue;
              label = 0.0;
            }
            double* u = &out[target * dim];
            double dot = 0;
            for (std::size_t d = 0; d < dim; ++d) dot += v[d] * u[d];
            const double g = lr * (label - sigmoid(dot));
            for (std::size_t d = 0; d < dim; ++d) {
              step[d] += g * u[d];
              u[d] += g * v[d];
            }
          }
          for (std::size_t d = 0; d < dim; ++d) v[d] += step[d];
        }
      }
    }
  }
  return table;
}

}  // namespace sememe::data
